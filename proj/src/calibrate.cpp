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
#include "scopeguard/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "scopeguard/error.hpp"
#include "scopeguard/rng.hpp"

namespace scopeguard {

void CalibrationConfig::validate() const {
  if (r_batches < 2)
    throw InvalidConfigError("calibration needs at least two resampled batches");
  if (!(pos_accuracy >= 0.0 && pos_accuracy < neg_accuracy && neg_accuracy <= 1.0))
    throw InvalidConfigError("accuracy cutoffs must satisfy 0 <= pos < neg <= 1");
  if (!(k_max >= 0.0) || !std::isfinite(k_max))
    throw InvalidConfigError("k_max must be a non-negative real");
  if (!(fpr_target >= 0.0 && fpr_target <= 1.0))
    throw InvalidConfigError("fpr target must lie in [0, 1]");
  if (k_gap < 0.0) throw InvalidConfigError("k gap must be non-negative");
  if (tss_size < 2) throw InvalidConfigError("TSS size must be at least 2");
}

namespace {

struct Pools {
  std::vector<Index> correct;
  std::vector<Index> incorrect;
};

Pools split_by_correctness(const Dataset& test) {
  if (!test.predictions)
    throw MissingPredictionsError("calibration test set has no predictions");
  Pools pools;
  for (Index i = 0; i < test.rows(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    if ((*test.predictions)[s] == test.labels[s])
      pools.correct.push_back(i);
    else
      pools.incorrect.push_back(i);
  }
  return pools;
}

// A batch resampled (with replacement) from `pool`, optionally topped up
// from a second pool to hit an exact mix.
Dataset resample_batch(const Dataset& test, const std::vector<Index>& pool_a,
                       Index take_a, const std::vector<Index>& pool_b,
                       Index take_b, Rng& rng) {
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(take_a + take_b));
  for (Index pick :
       rng.sample_with_replacement(static_cast<Index>(pool_a.size()), take_a))
    chosen.push_back(pool_a[static_cast<std::size_t>(pick)]);
  for (Index pick :
       rng.sample_with_replacement(static_cast<Index>(pool_b.size()), take_b))
    chosen.push_back(pool_b[static_cast<std::size_t>(pick)]);
  return test.select_rows(chosen);
}

std::array<double, 4> overall_distances(const Dataset& batch,
                                        const CalibrationArtifact& artifact,
                                        Aggregation agg) {
  return batch_distance(batch, artifact.tss, agg).overall;
}

std::vector<double> k_grid(double k_max) {
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double k = static_cast<double>(i) / 10.0;  // steps of 0.1 sigma
    if (k > k_max + 1e-12) break;
    grid.push_back(k);
  }
  return grid;
}

}  // namespace

CalibrationArtifact fit(const Dataset& train, const Dataset& test,
                        Index batch_size, const CalibrationConfig& config) {
  config.validate();
  if (batch_size < 2) throw InvalidConfigError("batch size must be at least 2");

  CalibrationArtifact artifact;
  artifact.tss = build_tss(train, config.tss_size, config.seed);
  artifact.batch_size = batch_size;
  artifact.aggregation = config.aggregation;
  artifact.primary_measure = config.primary_measure;

  const Pools pools = split_by_correctness(test);
  if (pools.incorrect.empty())
    throw NoIncorrectSamplesError(
        "test set has no misclassified rows to calibrate on; hold out or "
        "perturb data until the model makes errors");

  Rng rng(derive_seed(config.seed, 1));
  std::array<std::vector<double>, 4> samples;
  for (auto& s : samples) s.reserve(static_cast<std::size_t>(config.r_batches));
  for (Index r = 0; r < config.r_batches; ++r) {
    const Dataset batch = resample_batch(test, pools.incorrect, batch_size,
                                         pools.incorrect, 0, rng);
    const auto values = overall_distances(batch, artifact, config.aggregation);
    for (std::size_t mi = 0; mi < 4; ++mi) samples[mi].push_back(values[mi]);
  }

  for (std::size_t mi = 0; mi < 4; ++mi) {
    const auto& v = samples[mi];
    const double count = static_cast<double>(v.size());
    double mu = 0.0;
    for (double d : v) mu += d;
    mu /= count;
    double ss = 0.0;
    for (double d : v) ss += (d - mu) * (d - mu);
    artifact.thresholds[mi].mu = mu;
    artifact.thresholds[mi].sigma = std::sqrt(ss / (count - 1.0));
  }
  return artifact;
}

std::vector<SweepRow> sweep(const CalibrationArtifact& artifact,
                            const Dataset& test,
                            const CalibrationConfig& config) {
  config.validate();
  if (artifact.batch_size < 2)
    throw NotCalibratedError("artifact has no fitted batch size");

  const Pools pools = split_by_correctness(test);
  if (pools.incorrect.empty())
    throw NoIncorrectSamplesError("test set has no misclassified rows");
  if (pools.correct.empty())
    throw EmptySampleError("test set has no correctly classified rows");

  const Index batch = artifact.batch_size;
  const auto n_correct = static_cast<Index>(
      std::ceil(config.neg_accuracy * static_cast<double>(batch)));
  const Index n_incorrect = batch - n_correct;

  Rng rng(derive_seed(config.seed, 2));
  std::vector<std::array<double, 4>> pos_scores, neg_scores;
  pos_scores.reserve(static_cast<std::size_t>(config.r_batches));
  neg_scores.reserve(static_cast<std::size_t>(config.r_batches));
  for (Index r = 0; r < config.r_batches; ++r) {
    const Dataset positive = resample_batch(test, pools.incorrect, batch,
                                            pools.incorrect, 0, rng);
    pos_scores.push_back(overall_distances(positive, artifact, config.aggregation));
    const Dataset negative = resample_batch(test, pools.correct, n_correct,
                                            pools.incorrect, n_incorrect, rng);
    neg_scores.push_back(overall_distances(negative, artifact, config.aggregation));
  }

  std::vector<SweepRow> rows;
  for (double k : k_grid(config.k_max)) {
    SweepRow row;
    row.k = k;
    for (std::size_t mi = 0; mi < 4; ++mi) {
      const double cutoff =
          artifact.thresholds[mi].mu + k * artifact.thresholds[mi].sigma;
      Index tp = 0, fp = 0;
      for (const auto& s : pos_scores) tp += s[mi] > cutoff ? 1 : 0;
      for (const auto& s : neg_scores) fp += s[mi] > cutoff ? 1 : 0;
      row.tpr[mi] = static_cast<double>(tp) / static_cast<double>(config.r_batches);
      row.fpr[mi] = static_cast<double>(fp) / static_cast<double>(config.r_batches);
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> select_threshold(const std::vector<SweepRow>& rows,
                                           DistanceMeasure measure,
                                           double fpr_target, double k_gap) {
  if (rows.empty()) throw InvalidConfigError("threshold selection needs sweep rows");
  const std::size_t mi = measure_index(measure);
  for (const auto& row : rows)
    if (row.fpr[mi] <= fpr_target) return {row.k, row.k + k_gap};
  throw NoFeasibleThresholdError(
      "no threshold factor reaches the false-positive target; best achievable "
      "fpr is " +
      std::to_string(best_achievable_fpr(rows, measure)));
}

double best_achievable_fpr(const std::vector<SweepRow>& rows,
                           DistanceMeasure measure) {
  double best = 1.0;
  for (const auto& row : rows)
    best = std::min(best, row.fpr[measure_index(measure)]);
  return best;
}

}  // namespace scopeguard
