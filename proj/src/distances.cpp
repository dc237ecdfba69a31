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
#include "scopeguard/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scopeguard/error.hpp"
#include "scopeguard/rng.hpp"

namespace scopeguard {

namespace {

Vector sorted_copy(Eigen::Ref<const Vector> v) {
  Vector s = v;
  std::sort(s.begin(), s.end());
  return s;
}

void require_nonempty(const Vector& x, const Vector& y) {
  if (x.size() == 0 || y.size() == 0)
    throw EmptySampleError("two-sample distance requires nonempty samples");
}

}  // namespace

PairDistances all_distances_sorted(const Vector& x_sorted,
                                   const Vector& y_sorted) {
  require_nonempty(x_sorted, y_sorted);
  const Index n = x_sorted.size();
  const Index m = y_sorted.size();
  const Index pooled_total = n + m;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double big_n = static_cast<double>(pooled_total);

  PairDistances d;
  double cvm_sum = 0.0;
  double ad_sum = 0.0;
  Index i = 0, j = 0;
  Index seen = 0;  // pooled count <= current z, exact
  double prev_z = 0.0;
  double prev_absdiff = 0.0;
  bool first = true;

  while (i < n || j < m) {
    double z;
    if (i < n && (j == m || x_sorted[i] <= y_sorted[j]))
      z = x_sorted[i];
    else
      z = y_sorted[j];

    if (!first) d.ws += prev_absdiff * (z - prev_z);

    Index wx = 0, wy = 0;
    while (i < n && x_sorted[i] == z) { ++i; ++wx; }
    while (j < m && y_sorted[j] == z) { ++j; ++wy; }
    seen += wx + wy;

    const double diff =
        static_cast<double>(i) / nd - static_cast<double>(j) / md;
    const double absdiff = std::abs(diff);
    const double w = static_cast<double>(wx + wy);

    d.ks = std::max(d.ks, absdiff);
    cvm_sum += w * diff * diff;
    if (seen < pooled_total) {
      const double h = static_cast<double>(seen) / big_n;
      ad_sum += w * diff * diff / (h * (1.0 - h));
    }
    prev_z = z;
    prev_absdiff = absdiff;
    first = false;
  }

  d.cvm = nd * md / (big_n * big_n) * cvm_sum;
  d.ad = nd * md / big_n * ad_sum;
  return d;
}

PairDistances all_distances(Eigen::Ref<const Vector> x,
                            Eigen::Ref<const Vector> y) {
  if (!x.allFinite() || !y.allFinite())
    throw InvalidValueError("two-sample distance requires finite samples");
  return all_distances_sorted(sorted_copy(x), sorted_copy(y));
}

double ks_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
  return all_distances(x, y).ks;
}
double cvm_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
  return all_distances(x, y).cvm;
}
double ad_distance(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
  return all_distances(x, y).ad;
}
double wasserstein_distance(Eigen::Ref<const Vector> x,
                            Eigen::Ref<const Vector> y) {
  return all_distances(x, y).ws;
}
double distance(DistanceMeasure measure, Eigen::Ref<const Vector> x,
                Eigen::Ref<const Vector> y) {
  return all_distances(x, y)[measure];
}

double bootstrap_pvalue(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y,
                        DistanceMeasure measure, Index b_resamples,
                        std::uint64_t seed) {
  if (b_resamples < 1)
    throw InvalidConfigError("permutation p-value needs at least one resample");
  const Index n = x.size();
  const Index m = y.size();
  const double d_obs = distance(measure, x, y);

  std::vector<double> pool(static_cast<std::size_t>(n + m));
  Eigen::Map<Vector>(pool.data(), n) = x;
  Eigen::Map<Vector>(pool.data() + n, m) = y;

  Rng rng(seed);
  Index count = 0;
  Vector xb(n), yb(m);
  for (Index b = 0; b < b_resamples; ++b) {
    rng.shuffle(pool);
    std::copy(pool.begin(), pool.begin() + n, xb.begin());
    std::copy(pool.begin() + n, pool.end(), yb.begin());
    std::sort(xb.begin(), xb.end());
    std::sort(yb.begin(), yb.end());
    if (all_distances_sorted(xb, yb)[measure] >= d_obs) ++count;
  }
  return (1.0 + static_cast<double>(count)) /
         (static_cast<double>(b_resamples) + 1.0);
}

double exhaustive_pvalue(Eigen::Ref<const Vector> x,
                         Eigen::Ref<const Vector> y, DistanceMeasure measure) {
  const Index n = x.size();
  const Index m = y.size();
  if (n == 0 || m == 0)
    throw EmptySampleError("two-sample distance requires nonempty samples");
  if (n + m > 16)
    throw InvalidConfigError("exhaustive permutation mode is limited to 16 pooled samples");
  const double d_obs = distance(measure, x, y);

  Vector pool(n + m);
  pool << x, y;

  // Lexicographic walk over all C(n+m, n) index subsets for the first sample.
  std::vector<Index> pick(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
  Index splits = 0;
  Index count = 0;
  Vector xb(n), yb(m);
  while (true) {
    Index xi = 0, yi = 0;
    std::size_t next_pick = 0;
    for (Index i = 0; i < n + m; ++i) {
      if (next_pick < pick.size() && pick[next_pick] == i) {
        xb[xi++] = pool[i];
        ++next_pick;
      } else {
        yb[yi++] = pool[i];
      }
    }
    std::sort(xb.begin(), xb.end());
    std::sort(yb.begin(), yb.end());
    ++splits;
    if (all_distances_sorted(xb, yb)[measure] >= d_obs) ++count;

    // advance to the next combination
    Index k = n - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == k + m) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (Index i = k + 1; i < n; ++i)
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }
  return (1.0 + static_cast<double>(count)) / (static_cast<double>(splits) + 1.0);
}

namespace {

double mean_column_distance(const Matrix& a, const Matrix& b,
                            DistanceMeasure measure) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    sum += distance(measure, a.col(j), b.col(j));
  return sum / static_cast<double>(a.cols());
}

}  // namespace

double bootstrap_pvalue_rows(const Matrix& a, const Matrix& b,
                             DistanceMeasure measure, Index b_resamples,
                             std::uint64_t seed) {
  if (b_resamples < 1)
    throw InvalidConfigError("permutation p-value needs at least one resample");
  if (a.cols() != b.cols())
    throw SchemaMismatchError("feature arity mismatch between samples");
  if (a.rows() == 0 || b.rows() == 0)
    throw EmptySampleError("two-sample distance requires nonempty samples");
  const Index n = a.rows();
  const double d_obs = mean_column_distance(a, b, measure);

  Matrix pool(a.rows() + b.rows(), a.cols());
  pool << a, b;
  std::vector<Index> order(static_cast<std::size_t>(pool.rows()));
  for (Index i = 0; i < pool.rows(); ++i) order[static_cast<std::size_t>(i)] = i;

  Rng rng(seed);
  Index count = 0;
  for (Index r = 0; r < b_resamples; ++r) {
    rng.shuffle(order);
    Matrix shuffled = pool(order, Eigen::all);
    const double d_b = mean_column_distance(shuffled.topRows(n),
                                            shuffled.bottomRows(b.rows()), measure);
    if (d_b >= d_obs) ++count;
  }
  return (1.0 + static_cast<double>(count)) /
         (static_cast<double>(b_resamples) + 1.0);
}

double class_weighted_mean(const std::vector<double>& values,
                           const std::vector<Index>& counts) {
  if (values.size() != counts.size() || values.empty())
    throw InvalidValueError("weighted mean needs matching nonempty vectors");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += static_cast<double>(counts[i]) * values[i];
    den += static_cast<double>(counts[i]);
  }
  return num / den;
}

BatchDistance batch_distance(const Dataset& batch, const TrainingScopeSet& tss,
                             Aggregation agg,
                             const std::vector<DistanceMeasure>& measures) {
  if (batch.rows() == 0) throw EmptySampleError("batch is empty");
  if (!batch.predictions)
    throw MissingPredictionsError("batch distance requires predicted classes");
  if (batch.cols() != tss.n_features())
    throw SchemaMismatchError("batch feature arity does not match the TSS");

  BatchDistance out;
  std::array<bool, 4> wanted{};
  for (DistanceMeasure m : measures) wanted[measure_index(m)] = true;

  // Group rows by predicted class (ascending class id).
  std::map<int, std::vector<Index>> groups;
  for (Index i = 0; i < batch.rows(); ++i)
    groups[(*batch.predictions)[static_cast<std::size_t>(i)]].push_back(i);

  std::vector<double> per_class_value[4];
  std::vector<Index> included_counts;
  for (const auto& [label, rows] : groups) {
    out.class_counts[label] = static_cast<Index>(rows.size());
    if (!tss.has_class(label)) {
      out.unknown_classes.push_back(label);
      continue;
    }
    if (rows.size() < 2) {
      out.skipped_classes.push_back(label);
      continue;
    }

    std::array<double, 4> agg_value;
    agg_value.fill(std::numeric_limits<double>::quiet_NaN());
    for (std::size_t mi = 0; mi < 4; ++mi)
      if (wanted[mi]) agg_value[mi] = 0.0;

    for (Index j = 0; j < batch.cols(); ++j) {
      Vector sub = batch.column_at(rows, j);
      std::sort(sub.begin(), sub.end());
      const PairDistances d =
          all_distances_sorted(sub, tss.cell(label, j).sorted_values());
      const auto values = d.as_array();
      for (std::size_t mi = 0; mi < 4; ++mi) {
        if (!wanted[mi]) continue;
        if (agg == Aggregation::Mean)
          agg_value[mi] += values[mi] / static_cast<double>(batch.cols());
        else
          agg_value[mi] = std::max(agg_value[mi], values[mi]);
      }
    }
    out.per_class[label] = agg_value;
    included_counts.push_back(static_cast<Index>(rows.size()));
    for (std::size_t mi = 0; mi < 4; ++mi)
      if (wanted[mi]) per_class_value[mi].push_back(agg_value[mi]);
  }

  if (included_counts.empty() && out.unknown_classes.empty())
    throw EmptySampleError(
        "no predicted class in the batch has the two samples needed for a distance");

  out.overall.fill(std::numeric_limits<double>::quiet_NaN());
  if (!included_counts.empty())
    for (std::size_t mi = 0; mi < 4; ++mi)
      if (wanted[mi])
        out.overall[mi] = class_weighted_mean(per_class_value[mi], included_counts);
  return out;
}

}  // namespace scopeguard
