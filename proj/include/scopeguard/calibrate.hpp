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
#include <utility>
#include <vector>

#include "scopeguard/dataset.hpp"
#include "scopeguard/distances.hpp"
#include "scopeguard/ecdf.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

/// Per-measure threshold statistics. The decision thresholds are
/// t_low = mu + k_low * sigma and t_high = mu + k_high * sigma.
struct MeasureThresholds {
  double mu = 0.0;
  double sigma = 0.0;
  double k_low = 0.0;
  double k_high = 0.0;
};

// The frozen output of development time: the TSS, the planned batch size and
// the per-measure threshold statistics. `calibrated` flips once a sweep has
// chosen the k factors; the monitor refuses artifacts where it is false
// (k_low = 0 is a legitimate calibrated value, so the flag cannot be
// inferred from the numbers).
struct CalibrationArtifact {
  static constexpr int kSchemaVersion = 1;

  TrainingScopeSet tss;
  Index batch_size = 0;
  std::array<MeasureThresholds, 4> thresholds{};  // indexed by measure
  Aggregation aggregation = Aggregation::Mean;
  DistanceMeasure primary_measure = DistanceMeasure::CVM;
  bool calibrated = false;
  int schema_version = kSchemaVersion;

  const MeasureThresholds& of(DistanceMeasure m) const {
    return thresholds[measure_index(m)];
  }
  double t_low(DistanceMeasure m) const {
    return of(m).mu + of(m).k_low * of(m).sigma;
  }
  double t_high(DistanceMeasure m) const {
    return of(m).mu + of(m).k_high * of(m).sigma;
  }
};

struct CalibrationConfig {
  Index r_batches = 200;     // resampled calibration batches per category
  double neg_accuracy = 0.8; // accuracy of a "still acceptable" batch
  double pos_accuracy = 0.0; // accuracy of an alarm-worthy batch (worst case)
  double k_max = 3.0;
  double fpr_target = 0.05;
  double k_gap = 1.0;        // k_high = k_low + k_gap
  Index tss_size = 100;
  Aggregation aggregation = Aggregation::Mean;
  DistanceMeasure primary_measure = DistanceMeasure::CVM;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One sweep grid point: threshold factor k and, per measure, the flagged
/// fraction of accuracy-0 batches (tpr) and of accuracy-0.8 batches (fpr).
struct SweepRow {
  double k = 0.0;
  std::array<double, 4> tpr{};
  std::array<double, 4> fpr{};
};

// Builds the TSS from the training set, splits the test rows into correct
// and incorrect by prediction vs label, resamples r_batches batches of
// batch_size from the incorrect pool (with replacement) and freezes each
// measure's mu and sigma over those batch distances. k factors stay 0
// pending a sweep. The mu/sigma are deliberately computed on batches of
// exactly batch_size: that is the statistic the runtime thresholds see.
CalibrationArtifact fit(const Dataset& train, const Dataset& test,
                        Index batch_size, const CalibrationConfig& config);

// TPR/FPR over thresholds mu + k*sigma for k = 0, 0.1, ..., k_max.
// Positive batches are all-misclassified rows; negative batches hold exactly
// ceil(neg_accuracy * batch_size) correct rows, remainder incorrect. A batch
// is flagged when its overall distance strictly exceeds the threshold.
std::vector<SweepRow> sweep(const CalibrationArtifact& artifact,
                            const Dataset& test,
                            const CalibrationConfig& config);

/// First k whose fpr meets the target (ties resolve to the smallest k, which
/// also maximizes tpr); k_high = k_low + k_gap. Throws
/// NoFeasibleThresholdError when no grid point qualifies.
std::pair<double, double> select_threshold(const std::vector<SweepRow>& rows,
                                           DistanceMeasure measure,
                                           double fpr_target,
                                           double k_gap = 1.0);

/// Smallest fpr any grid point reaches for `measure` (diagnostic for the
/// infeasible case).
double best_achievable_fpr(const std::vector<SweepRow>& rows,
                           DistanceMeasure measure);

}  // namespace scopeguard
