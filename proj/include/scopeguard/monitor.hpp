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
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "scopeguard/calibrate.hpp"
#include "scopeguard/dataset.hpp"
#include "scopeguard/distances.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

struct MonitorConfig {
  Index batch_size = 0;
  int max_extensions = 2;
  Aggregation aggregation = Aggregation::Mean;
  DistanceMeasure primary_measure = DistanceMeasure::CVM;
  std::vector<DistanceMeasure> measures{kAllMeasures.begin(), kAllMeasures.end()};

  /// Defaults taken from the artifact (batch size, aggregation, primary).
  static MonitorConfig from_artifact(const CalibrationArtifact& artifact);

  void validate() const;
};

enum class VerdictKind : std::uint8_t { InScope, Borderline, OutOfScope };

enum class OutOfScopeReason : std::uint8_t {
  ThresholdExceeded,
  UnknownClass,
  ExtensionsExhausted,
};

// Three-zone decision for one evaluated batch, with the full per-measure
// report attached (one measure decides; the rest travel along for offline
// analysis of measure disagreement). Borderline verdicts are not final: the
// window stays open and grows by one batch.
struct Verdict {
  VerdictKind kind = VerdictKind::InScope;
  std::optional<OutOfScopeReason> reason;
  int extensions_used = 0;
  std::int64_t batch_index = 0;
  BatchDistance distance;
  double t_low = 0.0;
  double t_high = 0.0;

  bool is_final() const { return kind != VerdictKind::Borderline; }
};

// Decision rule, boundary inclusive below:
//   d <= t_low            -> InScope
//   t_low < d <= t_high   -> Borderline while extensions remain, else
//                            OutOfScope(extensions_exhausted)
//   d > t_high            -> OutOfScope(threshold_exceeded)
// where d is the overall distance of the configured primary measure. A
// predicted class absent from the TSS is an immediate
// OutOfScope(unknown_class): an unseen class is the definition of a scope
// violation.
std::pair<BatchDistance, Verdict> evaluate_batch(
    const Dataset& batch, const CalibrationArtifact& artifact,
    const MonitorConfig& config, int extensions_used = 0);

// Single-writer streaming monitor: buffers (features, predicted label) pairs
// and evaluates whenever the buffer reaches the current target size. A
// Borderline outcome raises the target by one batch_size and re-evaluates on
// the enlarged buffer; final verdicts clear the buffer. push_sample calls
// must be externally serialized; the artifact is shared read-only.
class Monitor {
 public:
  Monitor(CalibrationArtifact artifact, MonitorConfig config);

  /// Appends one sample; returns a verdict when a window completes.
  std::optional<Verdict> push_sample(Eigen::Ref<const Vector> features,
                                     int predicted_label);

  /// Registers the single out-of-scope action, invoked synchronously with
  /// every final OutOfScope verdict. A throwing handler is reported to
  /// stderr and never corrupts monitor state.
  void on_out_of_scope(std::function<void(const Verdict&)> handler);

  Index buffered() const { return static_cast<Index>(predictions_.size()); }
  std::int64_t batches_completed() const { return batches_completed_; }
  const CalibrationArtifact& artifact() const { return artifact_; }
  const MonitorConfig& config() const { return config_; }

 private:
  Verdict evaluate_window();

  CalibrationArtifact artifact_;
  MonitorConfig config_;
  std::vector<double> buffer_;  // row-major staging, rows x n_features
  std::vector<int> predictions_;
  int extensions_ = 0;
  std::int64_t batches_completed_ = 0;
  std::function<void(const Verdict&)> handler_;
};

}  // namespace scopeguard
