/*
 * Copyright 2026 The scopeguard authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "scopeguard/monitor.hpp"

#include <exception>
#include <iostream>

#include "scopeguard/error.hpp"

namespace scopeguard {

MonitorConfig MonitorConfig::from_artifact(const CalibrationArtifact& artifact) {
  MonitorConfig config;
  config.batch_size = artifact.batch_size;
  config.aggregation = artifact.aggregation;
  config.primary_measure = artifact.primary_measure;
  return config;
}

void MonitorConfig::validate() const {
  if (batch_size < 2) throw InvalidConfigError("batch size must be at least 2");
  if (max_extensions < 0)
    throw InvalidConfigError("max extensions must be non-negative");
  if (measures.empty())
    throw InvalidConfigError("at least one measure must be reported");
}

std::pair<BatchDistance, Verdict> evaluate_batch(
    const Dataset& batch, const CalibrationArtifact& artifact,
    const MonitorConfig& config, int extensions_used) {
  if (!artifact.calibrated)
    throw NotCalibratedError(
        "artifact thresholds have not been selected; run a sweep first");
  if (batch.rows() == 0) throw EmptySampleError("cannot evaluate an empty batch");

  Verdict verdict;
  verdict.extensions_used = extensions_used;
  verdict.t_low = artifact.t_low(config.primary_measure);
  verdict.t_high = artifact.t_high(config.primary_measure);

  BatchDistance bd =
      batch_distance(batch, artifact.tss, config.aggregation, config.measures);
  if (!bd.unknown_classes.empty()) {
    verdict.kind = VerdictKind::OutOfScope;
    verdict.reason = OutOfScopeReason::UnknownClass;
    verdict.distance = bd;
    return {std::move(bd), std::move(verdict)};
  }

  const double d = bd.overall[measure_index(config.primary_measure)];
  if (d <= verdict.t_low) {
    verdict.kind = VerdictKind::InScope;
  } else if (d > verdict.t_high) {
    verdict.kind = VerdictKind::OutOfScope;
    verdict.reason = OutOfScopeReason::ThresholdExceeded;
  } else if (extensions_used < config.max_extensions) {
    verdict.kind = VerdictKind::Borderline;
  } else {
    verdict.kind = VerdictKind::OutOfScope;
    verdict.reason = OutOfScopeReason::ExtensionsExhausted;
  }
  verdict.distance = bd;
  return {std::move(bd), std::move(verdict)};
}

Monitor::Monitor(CalibrationArtifact artifact, MonitorConfig config)
    : artifact_(std::move(artifact)), config_(std::move(config)) {
  config_.validate();
  if (!artifact_.calibrated)
    throw NotCalibratedError(
        "artifact thresholds have not been selected; run a sweep first");
}

std::optional<Verdict> Monitor::push_sample(Eigen::Ref<const Vector> features,
                                            int predicted_label) {
  if (features.size() != artifact_.tss.n_features())
    throw SchemaMismatchError("sample arity does not match the artifact's TSS");
  if (!features.allFinite())
    throw InvalidValueError("sample contains a non-finite feature value");

  buffer_.insert(buffer_.end(), features.begin(), features.end());
  predictions_.push_back(predicted_label);

  const Index target = config_.batch_size * (1 + extensions_);
  if (buffered() < target) return std::nullopt;

  Verdict verdict = evaluate_window();
  if (verdict.kind == VerdictKind::Borderline) {
    ++extensions_;  // keep the window open, one more batch of data
    return verdict;
  }

  verdict.batch_index = batches_completed_++;
  buffer_.clear();
  predictions_.clear();
  extensions_ = 0;
  if (verdict.kind == VerdictKind::OutOfScope && handler_) {
    try {
      handler_(verdict);
    } catch (const std::exception& e) {
      std::cerr << "scopeguard: out-of-scope handler failed: " << e.what() << "\n";
    } catch (...) {
      std::cerr << "scopeguard: out-of-scope handler failed\n";
    }
  }
  return verdict;
}

Verdict Monitor::evaluate_window() {
  const auto rows = static_cast<Index>(predictions_.size());
  const Index cols = artifact_.tss.n_features();
  Dataset window;
  window.features =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(buffer_.data(), rows, cols);
  window.feature_names = artifact_.tss.feature_names;
  window.labels = predictions_;
  window.predictions = predictions_;

  auto [bd, verdict] = evaluate_batch(window, artifact_, config_, extensions_);
  verdict.batch_index = batches_completed_;
  return verdict;
}

void Monitor::on_out_of_scope(std::function<void(const Verdict&)> handler) {
  if (handler_)
    throw AlreadyRegisteredError("an out-of-scope handler is already registered");
  handler_ = std::move(handler);
}

}  // namespace scopeguard
