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
#include "scopeguard/ecdf.hpp"

#include <algorithm>
#include <cmath>

#include "scopeguard/error.hpp"
#include "scopeguard/rng.hpp"

namespace scopeguard {

Ecdf::Ecdf(Vector values) : sorted_(std::move(values)) {
  if (sorted_.size() == 0)
    throw EmptySampleError("cannot build an ECDF from an empty sample");
  if (!sorted_.allFinite())
    throw InvalidValueError("cannot build an ECDF from non-finite values");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  if (!std::isfinite(x))
    throw InvalidValueError("ECDF evaluated at a non-finite point");
  const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), x) -
                     sorted_.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

Ecdf build_ecdf(Eigen::Ref<const Vector> values) { return Ecdf(values); }

double ecdf_eval(const Ecdf& ecdf, double x) { return ecdf(x); }

const Ecdf& TrainingScopeSet::cell(int label, Index feature) const {
  auto it = cells.find(label);
  if (it == cells.end())
    throw UnknownClassError("class " + std::to_string(label) +
                            " is not part of the training scope set");
  return it->second.at(static_cast<std::size_t>(feature));
}

TrainingScopeSet build_tss(const Dataset& train, Index per_class_size,
                           std::uint64_t seed) {
  if (per_class_size < 2)
    throw InvalidConfigError("per-class TSS size must be at least 2");
  train.validate();
  if (train.rows() == 0) throw EmptySampleError("training set is empty");

  TrainingScopeSet tss;
  tss.feature_names = train.feature_names;
  tss.tss_size_per_class = per_class_size;
  tss.seed = seed;

  Rng rng(seed);
  for (int label : train.class_ids()) {
    const auto class_rows = train.rows_with_label(label);
    if (class_rows.empty())
      throw EmptyClassError("class " + std::to_string(label) + " has no rows");
    const Index take =
        std::min<Index>(per_class_size, static_cast<Index>(class_rows.size()));
    auto picked = rng.sample_without_replacement(
        static_cast<Index>(class_rows.size()), take);
    std::vector<Index> chosen;
    chosen.reserve(picked.size());
    for (Index p : picked) chosen.push_back(class_rows[static_cast<std::size_t>(p)]);

    std::vector<Ecdf> per_feature;
    per_feature.reserve(static_cast<std::size_t>(train.cols()));
    for (Index j = 0; j < train.cols(); ++j)
      per_feature.emplace_back(train.column_at(chosen, j));
    tss.cells.emplace(label, std::move(per_feature));
  }
  return tss;
}

}  // namespace scopeguard
