// Independent reference implementations used only by tests. Each oracle is a
// deliberately naive second route to the same quantity: double loops over the
// pooled points for the distances, lexicographic mask enumeration for the
// permutation null, bisection for the normal quantile. None of them share
// code with the production path they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "scopeguard/types.hpp"

namespace oracles {

using scopeguard::Index;
using scopeguard::Vector;

inline double count_leq(const std::vector<double>& sample, double z) {
  double count = 0;
  for (double v : sample)
    if (v <= z) count += 1;
  return count;
}

inline std::vector<double> pooled(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  std::vector<double> all = x;
  all.insert(all.end(), y.begin(), y.end());
  std::sort(all.begin(), all.end());
  return all;
}

inline double naive_ks(const std::vector<double>& x, const std::vector<double>& y) {
  double best = 0;
  for (double z : pooled(x, y)) {
    const double f = count_leq(x, z) / static_cast<double>(x.size());
    const double g = count_leq(y, z) / static_cast<double>(y.size());
    best = std::max(best, std::abs(f - g));
  }
  return best;
}

inline double naive_cvm(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  double sum = 0;
  for (double z : pooled(x, y)) {
    const double f = count_leq(x, z) / n;
    const double g = count_leq(y, z) / m;
    sum += (f - g) * (f - g);
  }
  return n * m / ((n + m) * (n + m)) * sum;
}

inline double naive_ad(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  const double big_n = n + m;
  double sum = 0;
  for (double z : pooled(x, y)) {
    const double h = (count_leq(x, z) + count_leq(y, z)) / big_n;
    if (h >= 1.0) continue;
    const double f = count_leq(x, z) / n;
    const double g = count_leq(y, z) / m;
    sum += (f - g) * (f - g) / (h * (1.0 - h));
  }
  return n * m / big_n * sum;
}

inline double naive_ws(const std::vector<double>& x, const std::vector<double>& y) {
  const auto grid = pooled(x, y);
  double sum = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double f = count_leq(x, grid[i]) / static_cast<double>(x.size());
    const double g = count_leq(y, grid[i]) / static_cast<double>(y.size());
    sum += std::abs(f - g) * (grid[i + 1] - grid[i]);
  }
  return sum;
}

/// All splits of the pooled multiset into sizes (|x|, |y|), the statistic
/// recomputed by `stat` on each; returns (splits, count of d >= d_obs).
template <class Stat>
std::pair<long, long> enumerate_splits(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       double d_obs, Stat stat) {
  const auto all = [&] {
    std::vector<double> v = x;
    v.insert(v.end(), y.begin(), y.end());
    return v;
  }();
  std::vector<bool> mask(all.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(x.size()), true);
  std::sort(mask.begin(), mask.end());  // lowest permutation first
  long splits = 0, hits = 0;
  do {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < all.size(); ++i)
      (mask[i] ? xs : ys).push_back(all[i]);
    ++splits;
    if (stat(xs, ys) >= d_obs - 1e-15) ++hits;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return {splits, hits};
}

/// Bisection inverse of the erfc-based normal CDF, good to ~1e-12.
inline double bisect_normal_quantile(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid * M_SQRT1_2) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> to_std(const Vector& v) {
  return {v.begin(), v.end()};
}

inline Vector to_eigen(const std::vector<double>& v) {
  Vector out(static_cast<Index>(v.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace oracles
