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

#include <optional>
#include <string>
#include <vector>

#include "scopeguard/dataset.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

/// Acquisition-stage planning parameters. alpha and power are probabilities;
/// safety_factor inflates the planned size beyond the minimum; cells with
/// |d| below d_floor are excluded instead of letting the size diverge.
struct PowerSpec {
  double alpha = 0.05;
  double power = 0.8;
  double safety_factor = 1.3;
  double d_floor = 0.2;
  std::optional<Index> batch_multiple;

  void validate() const;
};

struct CellEffect {
  int label = 0;
  Index feature = 0;
  double d = 0.0;
  Index n_required = 0;  // 0 for excluded cells
};

struct SampleSizePlan {
  std::vector<CellEffect> cells;           // |d| >= d_floor
  std::vector<CellEffect> excluded_cells;  // |d| <  d_floor
  std::vector<std::string> feature_names;
  Index n_max = 0;    // max n_required over included cells
  Index n_final = 0;  // ceil(n_max * safety), rounded up to batch_multiple
};

/// Standardized mean difference with the pooled (n-1) standard deviation:
/// d = (mean(x) - mean(y)) / s_pooled. Both samples need two points; two
/// zero-variance samples with different means throw DegenerateVarianceError.
double cohens_d(Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y);

/// Standard normal CDF (erfc-based).
double normal_cdf(double x);

/// Standard normal quantile: rational initial guess refined by one Newton
/// step against the erfc-based CDF. Absolute error below 1e-8 on (0, 1).
double inverse_normal_cdf(double p);

/// Per-group size for a two-sided two-sample comparison under the normal
/// approximation: n = ceil(2 * ((z_{1-alpha/2} + z_power) / |d|)^2).
/// Within +-1 of t-based tables at practical sizes.
Index required_sample_size(double d, double alpha, double power,
                           double d_floor = 0.2);

/// Per (class, feature): Cohen's d between the class-restricted train and
/// test samples, per-cell required size, and the max-rule reduction with
/// safety factor and optional rounding. Classes with fewer than two rows on
/// either side contribute excluded cells. Throws NoUsableEffectError when no
/// cell survives d_floor.
SampleSizePlan plan_sample_size(const Dataset& train, const Dataset& test,
                                const PowerSpec& spec);

}  // namespace scopeguard
