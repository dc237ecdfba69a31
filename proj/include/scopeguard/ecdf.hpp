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
#include <map>
#include <string>
#include <vector>

#include "scopeguard/dataset.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

// Empirical cumulative distribution function of one real-valued sample.
// Uses the right-continuous "<=" convention: eval(x) = (#values <= x) / n,
// so ties contribute multiplicity, eval(max) = 1 and eval is 0 below min.
class Ecdf {
 public:
  /// Sorts a copy of `values`. Throws EmptySampleError / InvalidValueError.
  explicit Ecdf(Vector values);

  /// Fraction of the sample <= x. Binary search over the sorted copy.
  double operator()(double x) const;

  Index size() const { return sorted_.size(); }
  const Vector& sorted_values() const { return sorted_; }
  double min() const { return sorted_[0]; }
  double max() const { return sorted_[sorted_.size() - 1]; }

 private:
  Vector sorted_;  // ascending, ties kept
};

/// Free-function spellings of the Ecdf contract.
Ecdf build_ecdf(Eigen::Ref<const Vector> values);
double ecdf_eval(const Ecdf& ecdf, double x);

// Per-class, per-feature ECDFs of a uniform sub-sample of the training set.
// The trusted reference every runtime batch is compared against.
struct TrainingScopeSet {
  std::map<int, std::vector<Ecdf>> cells;  // class -> one Ecdf per feature
  std::vector<std::string> feature_names;
  Index tss_size_per_class = 0;
  std::uint64_t seed = 0;

  Index n_features() const {
    return static_cast<Index>(feature_names.size());
  }
  Index n_classes() const { return static_cast<Index>(cells.size()); }
  bool has_class(int label) const { return cells.count(label) != 0; }
  const Ecdf& cell(int label, Index feature) const;
};

// Builds the TSS by drawing, per class, a uniform sub-sample without
// replacement of min(per_class_size, class size) rows. Sampling walks class
// ids in ascending order over row indices in original order, so a fixed seed
// reproduces the same TSS bit for bit.
TrainingScopeSet build_tss(const Dataset& train, Index per_class_size,
                           std::uint64_t seed);

}  // namespace scopeguard
