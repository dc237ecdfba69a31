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

// scopeguard: scope-compliance monitoring for ML systems from the command
// line. Subcommands mirror the pipeline stages:
//
//   synth     generate a synthetic scenario (train/test/stream CSVs)
//   power     plan the runtime batch size from train/test effect sizes
//   distance  compare two samples with the four ECDF distances
//   fit       freeze the TSS and per-measure mu/sigma from test errors
//   sweep     trace TPR/FPR over threshold factors and pick k_low/k_high
//   monitor   stream a CSV through the calibrated three-zone monitor
//
// Exit codes: 0 success (monitor: everything in scope), 1 input error,
// 2 statistical infeasibility, 3 out-of-scope detected.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scopeguard/calibrate.hpp"
#include "scopeguard/csv.hpp"
#include "scopeguard/distances.hpp"
#include "scopeguard/error.hpp"
#include "scopeguard/knn.hpp"
#include "scopeguard/monitor.hpp"
#include "scopeguard/power.hpp"
#include "scopeguard/rng.hpp"
#include "scopeguard/serialize.hpp"
#include "scopeguard/synth.hpp"

namespace {

using namespace scopeguard;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitOutOfScope = 3;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string output;  // redirect the primary stdout payload to a file
  std::string format = "json";
};

std::ostream& payload_stream(const GlobalOptions& global, std::ofstream& file) {
  if (global.output.empty()) return std::cout;
  file.open(global.output, std::ios::binary);
  if (!file) throw Error("cannot open '" + global.output + "' for writing");
  return file;
}

// Shared --model convenience: attach predictions from the built-in kNN when
// the CSV has no prediction column.
struct ModelOptions {
  std::string model;  // empty or "knn"
  int k = 5;
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
  cmd->add_option("--model", opts.model,
                  "fill in predictions with the built-in reference model "
                  "(only 'knn'); requires --train")
      ->check(CLI::IsMember({"knn"}));
  cmd->add_option("--k", opts.k, "neighbor count for --model knn")
      ->check(CLI::PositiveNumber);
}

Dataset ensure_predictions(Dataset data, const ModelOptions& opts,
                           const Dataset* train) {
  if (data.predictions) return data;
  if (opts.model.empty())
    throw MissingPredictionsError(
        "no 'prediction' column; add one or pass --model knn");
  if (!train)
    throw InvalidConfigError("--model knn requires --train");
  return with_knn_predictions(knn_fit(*train, opts.k), std::move(data));
}

// ---------------------------------------------------------------- synth ---

int run_synth(const GlobalOptions& global, const std::string& spec_path,
              const std::string& preset, const std::string& out_dir,
              bool seed_given) {
  ScenarioSpec spec;
  if (!preset.empty()) {
    if (preset != "separable")
      throw InvalidConfigError("unknown preset '" + preset + "'");
    spec = separable_scenario();
  } else if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw Error("cannot open '" + spec_path + "' for reading");
    ordered_json j;
    try {
      in >> j;
    } catch (const ordered_json::exception& e) {
      throw InvalidConfigError("cannot parse '" + spec_path + "': " + e.what());
    }
    spec = scenario_from_json(j);
  } else {
    throw InvalidConfigError("synth needs --preset or --spec");
  }
  if (seed_given) spec.seed = global.seed;

  const ScenarioData data = generate(spec);
  fs::create_directories(out_dir);
  write_dataset_csv(fs::path(out_dir) / "train.csv", data.train);
  write_dataset_csv(fs::path(out_dir) / "test.csv", data.test);
  write_dataset_csv(fs::path(out_dir) / "stream.csv", data.stream);
  std::cerr << "wrote train.csv, test.csv, stream.csv to " << out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- power ---

int run_power(const GlobalOptions& global, const std::string& train_path,
              const std::string& test_path, const PowerSpec& spec) {
  const Dataset train = read_dataset_csv(train_path);
  const Dataset test = read_dataset_csv(test_path);
  const SampleSizePlan plan = plan_sample_size(train, test, spec);
  std::ofstream file;
  payload_stream(global, file) << plan_to_json(plan).dump(2) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- distance ---

int run_distance(const GlobalOptions& global, const std::string& a_path,
                 const std::string& b_path,
                 const std::vector<std::string>& measure_names,
                 Index bootstrap_b) {
  const Dataset a = read_dataset_csv(a_path, /*require_label=*/false);
  const Dataset b = read_dataset_csv(b_path, /*require_label=*/false);
  if (a.cols() != b.cols())
    throw SchemaMismatchError("feature arity differs between the two files");

  std::vector<DistanceMeasure> measures;
  for (const auto& name : measure_names) measures.push_back(measure_from_name(name));
  if (measures.empty())
    measures.assign(kAllMeasures.begin(), kAllMeasures.end());

  auto make_report = [&](Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y,
                         std::uint64_t seed) {
    DistanceReport report;
    report.n = x.size();
    report.m = y.size();
    const PairDistances d = all_distances(x, y);
    for (DistanceMeasure m : measures) {
      report.value[measure_index(m)] = d[m];
      if (bootstrap_b > 0)
        report.p_value[measure_index(m)] =
            bootstrap_pvalue(x, y, m, bootstrap_b, seed);
    }
    return report;
  };

  ordered_json features_json;
  DistanceReport aggregate;
  aggregate.n = a.rows();
  aggregate.m = b.rows();
  for (Index j = 0; j < a.cols(); ++j) {
    const DistanceReport r =
        make_report(a.features.col(j), b.features.col(j),
                    derive_seed(global.seed, static_cast<std::uint64_t>(j)));
    for (DistanceMeasure m : measures)
      aggregate.value[measure_index(m)] +=
          r.value[measure_index(m)] / static_cast<double>(a.cols());
    features_json[a.feature_names[static_cast<std::size_t>(j)]] = report_to_json(r);
  }
  if (bootstrap_b > 0)
    for (DistanceMeasure m : measures)
      aggregate.p_value[measure_index(m)] = bootstrap_pvalue_rows(
          a.features, b.features, m, bootstrap_b, derive_seed(global.seed, 1000));

  std::ofstream file;
  std::ostream& out = payload_stream(global, file);
  if (global.format == "csv") {
    ordered_json flat = features_json;
    flat["aggregate"] = report_to_json(aggregate);
    out << "feature,measure,value,p_value\n";
    for (const auto& [feature, report] : flat.items())
      for (DistanceMeasure m : measures) {
        const std::string name(measure_name(m));
        out << feature << ',' << name << ','
            << format_double(report.at(name).get<double>()) << ',';
        if (report.contains("p_" + name))
          out << format_double(report.at("p_" + name).get<double>());
        out << '\n';
      }
  } else {
    ordered_json j;
    j["features"] = std::move(features_json);
    j["aggregate"] = report_to_json(aggregate);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ fit ---

int run_fit(const GlobalOptions& global, const std::string& train_path,
            const std::string& test_path, Index batch_size,
            CalibrationConfig config, const ModelOptions& model,
            const std::string& out_path) {
  config.seed = global.seed;
  const Dataset train = read_dataset_csv(train_path);
  const Dataset test =
      ensure_predictions(read_dataset_csv(test_path), model, &train);

  const CalibrationArtifact artifact = fit(train, test, batch_size, config);
  save_artifact(out_path, artifact);

  std::printf("%-8s %-14s %s\n", "measure", "mu", "sigma");
  for (DistanceMeasure m : kAllMeasures) {
    const auto& t = artifact.of(m);
    std::printf("%-8s %-14.6g %.6g\n", std::string(measure_name(m)).c_str(),
                t.mu, t.sigma);
  }
  std::printf("artifact written to %s\n", out_path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------- sweep ---

int run_sweep(const GlobalOptions& global, const std::string& artifact_path,
              const std::string& test_path, CalibrationConfig config,
              const ModelOptions& model, const std::string& train_path,
              const std::string& out_path, std::string artifact_out) {
  config.seed = global.seed;
  CalibrationArtifact artifact = load_artifact(artifact_path);
  std::optional<Dataset> train;
  if (!train_path.empty()) train = read_dataset_csv(train_path);
  const Dataset test = ensure_predictions(read_dataset_csv(test_path), model,
                                          train ? &*train : nullptr);

  const auto rows = sweep(artifact, test, config);

  // The primary measure must reach the target; secondary measures that
  // cannot (the paper's KS caveat) fall back to k_max with a warning.
  const auto [k_low, k_high] =
      select_threshold(rows, config.primary_measure, config.fpr_target, config.k_gap);
  for (DistanceMeasure m : kAllMeasures) {
    auto& t = artifact.thresholds[measure_index(m)];
    if (m == config.primary_measure) {
      t.k_low = k_low;
      t.k_high = k_high;
      continue;
    }
    try {
      std::tie(t.k_low, t.k_high) =
          select_threshold(rows, m, config.fpr_target, config.k_gap);
    } catch (const NoFeasibleThresholdError&) {
      t.k_low = config.k_max;
      t.k_high = config.k_max + config.k_gap;
      std::cerr << "warning: no feasible threshold for " << measure_name(m)
                << " (best fpr " << best_achievable_fpr(rows, m)
                << "); pinned at k_max\n";
    }
  }
  artifact.primary_measure = config.primary_measure;
  artifact.calibrated = true;

  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) throw Error("cannot open '" + out_path + "' for writing");
  write_sweep_csv(csv, rows);

  if (artifact_out.empty())
    artifact_out = (fs::path(out_path).parent_path() /
                    (fs::path(out_path).stem().string() + ".artifact.json"))
                       .string();
  save_artifact(artifact_out, artifact);

  std::printf("selected k_low=%g k_high=%g for %s\n", k_low, k_high,
              std::string(measure_name(config.primary_measure)).c_str());
  std::printf("sweep written to %s, calibrated artifact to %s\n",
              out_path.c_str(), artifact_out.c_str());
  return kExitOk;
}

// -------------------------------------------------------------- monitor ---

int run_monitor(const GlobalOptions& global, const std::string& artifact_path,
                const std::string& stream_path, int max_extensions,
                const ModelOptions& model, const std::string& train_path,
                const std::string& out_path) {
  (void)global;
  CalibrationArtifact artifact = load_artifact(artifact_path);

  Dataset stream;
  if (stream_path == "-") {
    stream = read_dataset_csv(std::cin, "<stdin>", /*require_label=*/false);
  } else {
    stream = read_dataset_csv(stream_path, /*require_label=*/false);
  }
  if (stream.cols() != artifact.tss.n_features())
    throw SchemaMismatchError("stream feature arity does not match the artifact");
  std::optional<Dataset> train;
  if (!train_path.empty()) train = read_dataset_csv(train_path);
  stream = ensure_predictions(std::move(stream), model, train ? &*train : nullptr);

  MonitorConfig config = MonitorConfig::from_artifact(artifact);
  config.max_extensions = max_extensions;
  Monitor monitor(std::move(artifact), config);

  std::ofstream file;
  std::ostream& out = [&]() -> std::ostream& {
    if (out_path.empty()) return std::cout;
    file.open(out_path, std::ios::binary);
    if (!file) throw Error("cannot open '" + out_path + "' for writing");
    return file;
  }();

  Index in_scope = 0, borderline = 0, out_of_scope = 0;
  for (Index i = 0; i < stream.rows(); ++i) {
    const auto verdict = monitor.push_sample(
        stream.features.row(i).transpose(),
        (*stream.predictions)[static_cast<std::size_t>(i)]);
    if (!verdict) continue;
    out << verdict_to_json(*verdict, config.measures).dump() << "\n";
    switch (verdict->kind) {
      case VerdictKind::InScope: ++in_scope; break;
      case VerdictKind::Borderline: ++borderline; break;
      case VerdictKind::OutOfScope: ++out_of_scope; break;
    }
  }
  if (monitor.buffered() > 0)
    std::cerr << "warning: dropped " << monitor.buffered()
              << " trailing samples (less than one batch)\n";
  std::cerr << "summary: in_scope=" << in_scope << " borderline=" << borderline
            << " out_of_scope=" << out_of_scope << "\n";
  return out_of_scope > 0 ? kExitOutOfScope : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical-distance scope monitoring for ML systems"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "RNG seed (all subcommands are deterministic under it)")
      ->envname("SCOPEGUARD_SEED");
  app.add_option("--output", global.output, "write the stdout payload to a file");
  app.add_option("--format", global.format, "payload format where applicable")
      ->check(CLI::IsMember({"json", "csv"}));

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic scenario");
  std::string synth_spec, synth_preset, synth_out_dir;
  synth->add_option("--spec", synth_spec, "scenario spec JSON file");
  synth->add_option("--preset", synth_preset, "built-in scenario ('separable')");
  synth->add_option("--out-dir", synth_out_dir, "output directory")->required();

  // power
  auto* power = app.add_subcommand("power", "plan the runtime batch size");
  std::string power_train, power_test;
  PowerSpec power_spec;
  Index power_multiple = 0;
  power->add_option("--train", power_train, "training CSV")->required();
  power->add_option("--test", power_test, "testing CSV")->required();
  power->add_option("--alpha", power_spec.alpha, "significance level");
  power->add_option("--power", power_spec.power, "target power");
  power->add_option("--safety", power_spec.safety_factor, "safety factor on n_max");
  power->add_option("--d-floor", power_spec.d_floor, "minimum usable |effect size|");
  power->add_option("--batch-multiple", power_multiple,
                    "round n_final up to a multiple");

  // distance
  auto* dist = app.add_subcommand("distance", "compare two samples");
  std::string dist_a, dist_b;
  std::vector<std::string> dist_measures;
  Index dist_bootstrap = 0;
  dist->add_option("--a", dist_a, "first sample CSV (feature columns)")->required();
  dist->add_option("--b", dist_b, "second sample CSV (feature columns)")->required();
  dist->add_option("--measures", dist_measures, "subset of ks,cvm,ad,ws")
      ->delimiter(',');
  dist->add_option("--bootstrap", dist_bootstrap,
                   "permutation resamples for p-values (0 = skip)");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "freeze TSS and threshold statistics");
  std::string fit_train, fit_test, fit_out;
  Index fit_batch_size = 0;
  CalibrationConfig fit_config;
  ModelOptions fit_model;
  fit_cmd->add_option("--train", fit_train, "training CSV")->required();
  fit_cmd->add_option("--test", fit_test, "testing CSV (predictions or --model)")
      ->required();
  fit_cmd->add_option("--batch-size", fit_batch_size, "runtime batch size")
      ->required()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tss-size", fit_config.tss_size, "per-class TSS sub-sample size");
  fit_cmd->add_option("--r-batches", fit_config.r_batches,
                      "resampled calibration batches");
  fit_cmd->add_option("--out", fit_out, "artifact JSON path")->required();
  add_model_options(fit_cmd, fit_model);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "trace TPR/FPR and select thresholds");
  std::string sweep_artifact, sweep_test, sweep_out, sweep_artifact_out, sweep_train;
  CalibrationConfig sweep_config;
  ModelOptions sweep_model;
  sweep_cmd->add_option("--artifact", sweep_artifact, "fitted artifact JSON")->required();
  sweep_cmd->add_option("--test", sweep_test, "testing CSV (predictions or --model)")
      ->required();
  sweep_cmd->add_option("--k-max", sweep_config.k_max, "largest threshold factor");
  sweep_cmd->add_option("--fpr-target", sweep_config.fpr_target,
                        "acceptable false-positive rate");
  sweep_cmd->add_option("--r-batches", sweep_config.r_batches,
                        "resampled batches per category");
  sweep_cmd->add_option("--neg-accuracy", sweep_config.neg_accuracy,
                        "accuracy of a still-acceptable batch");
  sweep_cmd->add_option("--out", sweep_out, "sweep CSV path")->required();
  sweep_cmd->add_option("--artifact-out", sweep_artifact_out,
                        "calibrated artifact path (default: alongside --out)");
  sweep_cmd->add_option("--train", sweep_train, "training CSV (only for --model)");
  add_model_options(sweep_cmd, sweep_model);

  // monitor
  auto* mon = app.add_subcommand("monitor", "run the three-zone monitor over a stream");
  std::string mon_artifact, mon_stream, mon_out, mon_train;
  int mon_extensions = 2;
  ModelOptions mon_model;
  mon->add_option("--artifact", mon_artifact, "calibrated artifact JSON")->required();
  mon->add_option("--stream", mon_stream, "stream CSV ('-' for stdin)")->required();
  mon->add_option("--max-extensions", mon_extensions,
                  "borderline data requests before alarming");
  mon->add_option("--out", mon_out, "verdict JSONL path (default: stdout)");
  mon->add_option("--train", mon_train, "training CSV (only for --model)");
  add_model_options(mon, mon_model);

  // Global options are accepted on either side of the subcommand name.
  for (CLI::App* sub : {synth, power, dist, fit_cmd, sweep_cmd, mon})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*synth)
      return run_synth(global, synth_spec, synth_preset, synth_out_dir,
                       app.count("--seed") > 0);
    if (*power) {
      if (power_multiple > 0) power_spec.batch_multiple = power_multiple;
      return run_power(global, power_train, power_test, power_spec);
    }
    if (*dist)
      return run_distance(global, dist_a, dist_b, dist_measures, dist_bootstrap);
    if (*fit_cmd)
      return run_fit(global, fit_train, fit_test, fit_batch_size, fit_config,
                     fit_model, fit_out);
    if (*sweep_cmd)
      return run_sweep(global, sweep_artifact, sweep_test, sweep_config,
                       sweep_model, sweep_train, sweep_out, sweep_artifact_out);
    if (*mon)
      return run_monitor(global, mon_artifact, mon_stream, mon_extensions,
                         mon_model, mon_train, mon_out);
  } catch (const NoUsableEffectError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NoIncorrectSamplesError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: if the model is near-perfect, hold out a class or widen "
                 "the test set so calibration sees errors\n";
    return kExitInfeasible;
  } catch (const NoFeasibleThresholdError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const EffectTooSmallError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DegenerateVarianceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
