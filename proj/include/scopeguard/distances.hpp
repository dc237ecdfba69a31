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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "scopeguard/dataset.hpp"
#include "scopeguard/ecdf.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

// All four statistics from one merged-grid pass over two samples X (size n)
// and Y (size m). With F, G the sample ECDFs, H the pooled ECDF, z_i the
// pooled distinct values, w_i their pooled multiplicities and N = n + m:
//
//   KS  = max_i |F(z_i) - G(z_i)|
//   CvM = n*m/N^2 * sum_i w_i * (F(z_i) - G(z_i))^2
//   AD  = n*m/N   * sum_{i : H(z_i) < 1} w_i * (F(z_i) - G(z_i))^2
//                                        / (H(z_i) * (1 - H(z_i)))
//   WS  = sum_{i<K} |F(z_i) - G(z_i)| * (z_{i+1} - z_i)
//
// KS, CvM and AD are invariant under shared strictly increasing transforms;
// WS carries the feature's unit. All are symmetric, non-negative and zero
// for identical multisets.
struct PairDistances {
  double ks = 0.0;
  double cvm = 0.0;
  double ad = 0.0;
  double ws = 0.0;

  double operator[](DistanceMeasure m) const {
    switch (m) {
      case DistanceMeasure::KS: return ks;
      case DistanceMeasure::CVM: return cvm;
      case DistanceMeasure::AD: return ad;
      case DistanceMeasure::WS: return ws;
    }
    return 0.0;
  }
  std::array<double, 4> as_array() const { return {ks, cvm, ad, ws}; }
};

/// One pass over both samples; sorts copies internally.
PairDistances all_distances(Eigen::Ref<const Vector> x,
                            Eigen::Ref<const Vector> y);

/// Same, for inputs already sorted ascending (no copies, no checks beyond
/// emptiness).
PairDistances all_distances_sorted(const Vector& x_sorted,
                                   const Vector& y_sorted);

double ks_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y);
double cvm_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y);
double ad_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y);
double wasserstein_distance(Eigen::Ref<const Vector> x,
                            Eigen::Ref<const Vector> y);
double distance(DistanceMeasure measure, Eigen::Ref<const Vector> x,
                Eigen::Ref<const Vector> y);

// Permutation p-value for the two-sample equality null: the pooled multiset
// is re-split uniformly at random into sizes (n, m) without replacement, B
// times, and p = (1 + #{d_b >= d_obs}) / (B + 1). The add-one smoothing
// keeps p in (0, 1].
double bootstrap_pvalue(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y,
                        DistanceMeasure measure, Index b_resamples,
                        std::uint64_t seed);

/// Exact variant enumerating all C(n+m, n) splits; requires n + m <= 16.
/// Uses the same (1 + count) / (splits + 1) smoothing as the Monte-Carlo
/// estimator.
double exhaustive_pvalue(Eigen::Ref<const Vector> x,
                         Eigen::Ref<const Vector> y, DistanceMeasure measure);

/// Row-permutation p-value for the feature-averaged statistic between two
/// feature matrices (rows = samples). Backs the aggregate p of the CLI
/// distance report.
double bootstrap_pvalue_rows(const Matrix& a, const Matrix& b,
                             DistanceMeasure measure, Index b_resamples,
                             std::uint64_t seed);

// Distances of one batch against one reference sample, per measure, plus
// sample sizes and optional permutation p-values. Serializes flat:
// ks, cvm, ad, ws, p_ks, p_cvm, p_ad, p_ws, n, m.
struct DistanceReport {
  std::array<double, 4> value{};                  // indexed by measure
  std::array<std::optional<double>, 4> p_value{};
  Index n = 0;
  Index m = 0;
};

/// Count-weighted mean, the default reduction over per-class values.
double class_weighted_mean(const std::vector<double>& values,
                           const std::vector<Index>& counts);

// Batch-vs-TSS distances. Rows are grouped by predicted class; each group is
// compared feature-wise against the matching TSS cell and reduced by `agg`
// (mean by default); the overall value is the class-count-weighted mean over
// groups. Groups smaller than 2 rows are skipped (one-point ECDFs make AD and
// CvM degenerate); predicted classes absent from the TSS are reported in
// `unknown_classes` for the caller to treat as a maximal alarm.
struct BatchDistance {
  std::map<int, std::array<double, 4>> per_class;
  std::array<double, 4> overall{};
  std::map<int, Index> class_counts;     // all predicted classes in the batch
  std::vector<int> unknown_classes;      // absent from the TSS
  std::vector<int> skipped_classes;      // sub-batch of size < 2
};

BatchDistance batch_distance(const Dataset& batch, const TrainingScopeSet& tss,
                             Aggregation agg = Aggregation::Mean,
                             const std::vector<DistanceMeasure>& measures = {
                                 kAllMeasures.begin(), kAllMeasures.end()});

}  // namespace scopeguard
