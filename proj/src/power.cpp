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
#include "scopeguard/power.hpp"

#include <algorithm>
#include <cmath>

#include "scopeguard/error.hpp"

namespace scopeguard {

void PowerSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidConfigError("alpha must lie in (0, 1)");
  if (!(power > 0.0 && power < 1.0))
    throw InvalidConfigError("power must lie in (0, 1)");
  if (!(safety_factor >= 1.0))
    throw InvalidConfigError("safety factor must be >= 1");
  if (!(d_floor >= 0.0) || !std::isfinite(d_floor))
    throw InvalidConfigError("d_floor must be a non-negative real");
  if (batch_multiple && *batch_multiple < 1)
    throw InvalidConfigError("batch multiple must be >= 1");
}

double cohens_d(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
  const Index n = x.size();
  const Index m = y.size();
  if (n < 2 || m < 2)
    throw EmptySampleError("Cohen's d requires at least two points per sample");
  const double mx = x.mean();
  const double my = y.mean();
  const double vx = (x.array() - mx).square().sum() / static_cast<double>(n - 1);
  const double vy = (y.array() - my).square().sum() / static_cast<double>(m - 1);
  const double pooled = ((static_cast<double>(n - 1)) * vx +
                         (static_cast<double>(m - 1)) * vy) /
                        static_cast<double>(n + m - 2);
  if (pooled == 0.0) {
    if (mx == my) return 0.0;
    throw DegenerateVarianceError(
        "both samples are constant with different means; effect size is undefined");
  }
  return (mx - my) / std::sqrt(pooled);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

namespace {

// Rational approximation of the standard normal quantile (relative error
// about 1.15e-9 before refinement).
double quantile_initial_guess(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidValueError("quantile argument must lie strictly in (0, 1)");
  double z = quantile_initial_guess(p);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  if (pdf > 0.0) z -= (normal_cdf(z) - p) / pdf;
  return z;
}

Index required_sample_size(double d, double alpha, double power,
                           double d_floor) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0))
    throw InvalidConfigError("alpha and power must lie in (0, 1)");
  const double effect = std::abs(d);
  if (effect < d_floor)
    throw EffectTooSmallError("effect size below the configured floor");
  const double z_alpha = inverse_normal_cdf(1.0 - alpha / 2.0);
  const double z_power = inverse_normal_cdf(power);
  const double ratio = (z_alpha + z_power) / effect;
  return static_cast<Index>(std::ceil(2.0 * ratio * ratio));
}

SampleSizePlan plan_sample_size(const Dataset& train, const Dataset& test,
                                const PowerSpec& spec) {
  spec.validate();
  train.validate();
  test.validate();
  if (train.cols() != test.cols() || train.feature_names != test.feature_names)
    throw SchemaMismatchError("train and test sets must share feature columns");
  if (train.class_ids() != test.class_ids())
    throw SchemaMismatchError("train and test sets must share class sets");

  SampleSizePlan plan;
  plan.feature_names = train.feature_names;
  for (int label : train.class_ids()) {
    const auto train_rows = train.rows_with_label(label);
    const auto test_rows = test.rows_with_label(label);
    const bool class_usable = train_rows.size() >= 2 && test_rows.size() >= 2;
    for (Index j = 0; j < train.cols(); ++j) {
      CellEffect cell{label, j, 0.0, 0};
      if (class_usable)
        cell.d = cohens_d(train.column_at(train_rows, j),
                          test.column_at(test_rows, j));
      if (std::abs(cell.d) < spec.d_floor) {
        plan.excluded_cells.push_back(cell);
        continue;
      }
      cell.n_required =
          required_sample_size(cell.d, spec.alpha, spec.power, spec.d_floor);
      plan.n_max = std::max(plan.n_max, cell.n_required);
      plan.cells.push_back(cell);
    }
  }
  if (plan.cells.empty())
    throw NoUsableEffectError(
        "no (class, feature) cell reaches the effect-size floor; "
        "set the batch size manually");

  plan.n_final = static_cast<Index>(
      std::ceil(static_cast<double>(plan.n_max) * spec.safety_factor));
  if (spec.batch_multiple) {
    const Index mult = *spec.batch_multiple;
    plan.n_final = (plan.n_final + mult - 1) / mult * mult;
  }
  return plan;
}

}  // namespace scopeguard
