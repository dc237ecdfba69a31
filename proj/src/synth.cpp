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
#include "scopeguard/synth.hpp"

#include <string>

#include "scopeguard/error.hpp"
#include "scopeguard/rng.hpp"

namespace scopeguard {

void ScenarioSpec::validate() const {
  if (n_classes < 1 || n_features < 1)
    throw InvalidConfigError("scenario needs at least one class and one feature");
  if (class_means.rows() != n_classes || class_means.cols() != n_features)
    throw InvalidConfigError("class_means must be n_classes x n_features");
  if (feature_sigma.size() != n_features)
    throw InvalidConfigError("feature_sigma must have one entry per feature");
  if (!(feature_sigma.array() > 0.0).all())
    throw InvalidConfigError("feature sigmas must be positive");
  if (!class_means.allFinite() || !feature_sigma.allFinite())
    throw InvalidConfigError("scenario parameters must be finite");
  if (train_per_class < 1 || test_per_class < 1)
    throw InvalidConfigError("train/test sizes must be positive");
  for (const auto& seg : segments) {
    if (seg.length < 1) throw InvalidConfigError("segment length must be >= 1");
    if (seg.drift_sigma.size() != n_features)
      throw InvalidConfigError("segment drift must have one entry per feature");
    if (!seg.drift_sigma.allFinite())
      throw InvalidConfigError("segment drift must be finite");
  }
}

namespace {

std::vector<std::string> default_names(Index n_features) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n_features));
  for (Index j = 0; j < n_features; ++j) names.push_back("f" + std::to_string(j));
  return names;
}

// One labeled block per class, rows drawn as mean + sigma .* z.
Dataset draw_per_class(const ScenarioSpec& spec, Index per_class, Rng& rng) {
  const Index rows = per_class * spec.n_classes;
  Matrix features(rows, spec.n_features);
  std::vector<int> labels(static_cast<std::size_t>(rows));
  Index r = 0;
  for (Index c = 0; c < spec.n_classes; ++c) {
    for (Index i = 0; i < per_class; ++i, ++r) {
      labels[static_cast<std::size_t>(r)] = static_cast<int>(c);
      for (Index j = 0; j < spec.n_features; ++j)
        features(r, j) =
            spec.class_means(c, j) + spec.feature_sigma[j] * rng.normal();
    }
  }
  return make_dataset(std::move(features), std::move(labels), std::nullopt,
                      default_names(spec.n_features));
}

}  // namespace

ScenarioData generate(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  ScenarioData data;
  data.train = draw_per_class(spec, spec.train_per_class, rng);
  data.test = draw_per_class(spec, spec.test_per_class, rng);

  Index stream_rows = 0;
  for (const auto& seg : spec.segments) stream_rows += seg.length;
  Matrix features(stream_rows, spec.n_features);
  std::vector<int> labels(static_cast<std::size_t>(stream_rows));
  std::vector<bool> scope(static_cast<std::size_t>(stream_rows));
  Index r = 0;
  for (const auto& seg : spec.segments) {
    for (Index i = 0; i < seg.length; ++i, ++r) {
      const auto c = static_cast<Index>(
          rng.uniform_index(static_cast<std::uint64_t>(spec.n_classes)));
      labels[static_cast<std::size_t>(r)] = static_cast<int>(c);
      scope[static_cast<std::size_t>(r)] = seg.in_scope;
      for (Index j = 0; j < spec.n_features; ++j)
        features(r, j) = spec.class_means(c, j) +
                         spec.feature_sigma[j] * (rng.normal() + seg.drift_sigma[j]);
    }
  }
  data.stream = make_dataset(std::move(features), std::move(labels),
                             std::nullopt, default_names(spec.n_features));
  data.stream.in_scope = std::move(scope);
  return data;
}

ScenarioSpec separable_scenario(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.n_classes = 3;
  spec.n_features = 4;
  spec.class_means.resize(3, 4);
  spec.class_means << 0, 0, 0, 0,  //
      4, 4, 0, 0,                  //
      0, 0, 4, 4;
  spec.feature_sigma = Vector::Ones(4);
  spec.train_per_class = 300;
  spec.test_per_class = 1200;
  // Ten in-scope batches of 60, then four batches drifted by 2 sigma on
  // every feature, which lands 4 sigma away from all three class means.
  StreamSegment steady{600, Vector::Zero(4), true};
  StreamSegment drifted{240, Vector::Constant(4, 2.0), false};
  spec.segments = {steady, drifted};
  spec.seed = seed;
  return spec;
}

}  // namespace scopeguard
