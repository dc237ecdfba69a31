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
#include "scopeguard/serialize.hpp"

#include <fstream>
#include <ostream>

#include "scopeguard/csv.hpp"
#include "scopeguard/error.hpp"

namespace scopeguard {

ordered_json plan_to_json(const SampleSizePlan& plan) {
  auto cell_to_json = [&](const CellEffect& cell) {
    ordered_json j;
    j["class"] = cell.label;
    j["feature"] = plan.feature_names[static_cast<std::size_t>(cell.feature)];
    j["d"] = cell.d;
    if (cell.n_required > 0) j["n_required"] = cell.n_required;
    return j;
  };
  ordered_json j;
  j["cells"] = ordered_json::array();
  for (const auto& cell : plan.cells) j["cells"].push_back(cell_to_json(cell));
  j["excluded_cells"] = ordered_json::array();
  for (const auto& cell : plan.excluded_cells)
    j["excluded_cells"].push_back(cell_to_json(cell));
  j["n_max"] = plan.n_max;
  j["n_final"] = plan.n_final;
  return j;
}

ordered_json report_to_json(const DistanceReport& report) {
  ordered_json j;
  for (DistanceMeasure m : kAllMeasures)
    j[std::string(measure_name(m))] = report.value[measure_index(m)];
  for (DistanceMeasure m : kAllMeasures) {
    const auto& p = report.p_value[measure_index(m)];
    if (p) j["p_" + std::string(measure_name(m))] = *p;
  }
  j["n"] = report.n;
  j["m"] = report.m;
  return j;
}

ordered_json artifact_to_json(const CalibrationArtifact& artifact) {
  ordered_json j;
  j["schema_version"] = artifact.schema_version;
  j["batch_size"] = artifact.batch_size;
  j["aggregation"] = std::string(aggregation_name(artifact.aggregation));
  j["primary_measure"] = std::string(measure_name(artifact.primary_measure));
  j["calibrated"] = artifact.calibrated;
  ordered_json thresholds;
  for (DistanceMeasure m : kAllMeasures) {
    const auto& t = artifact.of(m);
    thresholds[std::string(measure_name(m))] = {
        {"mu", t.mu}, {"sigma", t.sigma}, {"k_low", t.k_low}, {"k_high", t.k_high}};
  }
  j["thresholds"] = std::move(thresholds);

  ordered_json tss;
  tss["seed"] = artifact.tss.seed;
  tss["tss_size_per_class"] = artifact.tss.tss_size_per_class;
  tss["feature_names"] = artifact.tss.feature_names;
  ordered_json classes;
  for (const auto& [label, per_feature] : artifact.tss.cells) {
    ordered_json arrays = ordered_json::array();
    for (const Ecdf& ecdf : per_feature) {
      ordered_json values = ordered_json::array();
      for (Index i = 0; i < ecdf.size(); ++i) values.push_back(ecdf.sorted_values()[i]);
      arrays.push_back(std::move(values));
    }
    classes[std::to_string(label)] = std::move(arrays);
  }
  tss["classes"] = std::move(classes);
  j["tss"] = std::move(tss);
  return j;
}

CalibrationArtifact artifact_from_json(const ordered_json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != CalibrationArtifact::kSchemaVersion)
      throw Error("unsupported artifact schema_version " + std::to_string(version) +
                  " (expected " + std::to_string(CalibrationArtifact::kSchemaVersion) + ")");

    CalibrationArtifact artifact;
    artifact.schema_version = version;
    artifact.batch_size = j.at("batch_size").get<Index>();
    artifact.aggregation = aggregation_from_name(j.at("aggregation").get<std::string>());
    artifact.primary_measure =
        measure_from_name(j.at("primary_measure").get<std::string>());
    artifact.calibrated = j.at("calibrated").get<bool>();
    for (DistanceMeasure m : kAllMeasures) {
      const auto& t = j.at("thresholds").at(std::string(measure_name(m)));
      auto& out = artifact.thresholds[measure_index(m)];
      out.mu = t.at("mu").get<double>();
      out.sigma = t.at("sigma").get<double>();
      out.k_low = t.at("k_low").get<double>();
      out.k_high = t.at("k_high").get<double>();
      if (!(out.sigma >= 0.0) || !(out.k_low >= 0.0) || out.k_high < out.k_low)
        throw Error("artifact thresholds for " + std::string(measure_name(m)) +
                    " violate sigma >= 0 and k_high >= k_low >= 0");
    }

    const auto& tss = j.at("tss");
    artifact.tss.seed = tss.at("seed").get<std::uint64_t>();
    artifact.tss.tss_size_per_class = tss.at("tss_size_per_class").get<Index>();
    artifact.tss.feature_names =
        tss.at("feature_names").get<std::vector<std::string>>();
    for (const auto& [key, arrays] : tss.at("classes").items()) {
      std::vector<Ecdf> per_feature;
      per_feature.reserve(arrays.size());
      for (const auto& values : arrays) {
        Vector v(static_cast<Index>(values.size()));
        Index i = 0;
        for (const auto& x : values) v[i++] = x.get<double>();
        per_feature.emplace_back(std::move(v));
      }
      if (per_feature.size() != artifact.tss.feature_names.size())
        throw Error("TSS class " + key + " has the wrong number of feature cells");
      artifact.tss.cells.emplace(std::stoi(key), std::move(per_feature));
    }
    return artifact;
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("malformed artifact JSON: ") + e.what());
  }
}

void save_artifact(const std::filesystem::path& path,
                   const CalibrationArtifact& artifact) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << artifact_to_json(artifact).dump(2) << '\n';
}

CalibrationArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::exception& e) {
    throw Error("cannot parse '" + path.string() + "': " + e.what());
  }
  return artifact_from_json(j);
}

ordered_json verdict_to_json(const Verdict& verdict,
                             const std::vector<DistanceMeasure>& measures) {
  ordered_json j;
  j["batch_index"] = verdict.batch_index;
  switch (verdict.kind) {
    case VerdictKind::InScope: j["verdict"] = "in_scope"; break;
    case VerdictKind::Borderline: j["verdict"] = "borderline"; break;
    case VerdictKind::OutOfScope: j["verdict"] = "out_of_scope"; break;
  }
  if (verdict.reason) {
    switch (*verdict.reason) {
      case OutOfScopeReason::ThresholdExceeded:
        j["reason"] = "threshold_exceeded";
        break;
      case OutOfScopeReason::UnknownClass: j["reason"] = "unknown_class"; break;
      case OutOfScopeReason::ExtensionsExhausted:
        j["reason"] = "extensions_exhausted";
        break;
    }
  } else {
    j["reason"] = nullptr;
  }
  ordered_json values;
  for (DistanceMeasure m : measures)
    values[std::string(measure_name(m))] = verdict.distance.overall[measure_index(m)];
  j["measure_values"] = std::move(values);
  j["thresholds"] = {{"t_low", verdict.t_low}, {"t_high", verdict.t_high}};
  ordered_json counts;
  for (const auto& [label, count] : verdict.distance.class_counts)
    counts[std::to_string(label)] = count;
  j["class_counts"] = std::move(counts);
  j["extensions_used"] = verdict.extensions_used;
  return j;
}

ordered_json scenario_to_json(const ScenarioSpec& spec) {
  ordered_json j;
  j["n_classes"] = spec.n_classes;
  j["n_features"] = spec.n_features;
  ordered_json means = ordered_json::array();
  for (Index c = 0; c < spec.n_classes; ++c) {
    ordered_json row = ordered_json::array();
    for (Index f = 0; f < spec.n_features; ++f) row.push_back(spec.class_means(c, f));
    means.push_back(std::move(row));
  }
  j["class_means"] = std::move(means);
  ordered_json sigma = ordered_json::array();
  for (Index f = 0; f < spec.n_features; ++f) sigma.push_back(spec.feature_sigma[f]);
  j["feature_sigma"] = std::move(sigma);
  j["train_per_class"] = spec.train_per_class;
  j["test_per_class"] = spec.test_per_class;
  ordered_json segments = ordered_json::array();
  for (const auto& seg : spec.segments) {
    ordered_json s;
    s["length"] = seg.length;
    ordered_json drift = ordered_json::array();
    for (Index f = 0; f < spec.n_features; ++f) drift.push_back(seg.drift_sigma[f]);
    s["drift"] = std::move(drift);
    s["scope"] = seg.in_scope ? "in" : "out";
    segments.push_back(std::move(s));
  }
  j["segments"] = std::move(segments);
  j["seed"] = spec.seed;
  return j;
}

ScenarioSpec scenario_from_json(const ordered_json& j) {
  try {
    ScenarioSpec spec;
    spec.n_classes = j.at("n_classes").get<Index>();
    spec.n_features = j.at("n_features").get<Index>();
    spec.class_means.resize(spec.n_classes, spec.n_features);
    const auto& means = j.at("class_means");
    for (Index c = 0; c < spec.n_classes; ++c)
      for (Index f = 0; f < spec.n_features; ++f)
        spec.class_means(c, f) =
            means.at(static_cast<std::size_t>(c)).at(static_cast<std::size_t>(f)).get<double>();
    spec.feature_sigma.resize(spec.n_features);
    const auto& sigma = j.at("feature_sigma");
    for (Index f = 0; f < spec.n_features; ++f)
      spec.feature_sigma[f] = sigma.at(static_cast<std::size_t>(f)).get<double>();
    spec.train_per_class = j.at("train_per_class").get<Index>();
    spec.test_per_class = j.at("test_per_class").get<Index>();
    for (const auto& s : j.at("segments")) {
      StreamSegment seg;
      seg.length = s.at("length").get<Index>();
      seg.drift_sigma.resize(spec.n_features);
      for (Index f = 0; f < spec.n_features; ++f)
        seg.drift_sigma[f] = s.at("drift").at(static_cast<std::size_t>(f)).get<double>();
      const auto scope = s.at("scope").get<std::string>();
      if (scope != "in" && scope != "out")
        throw InvalidConfigError("segment scope must be 'in' or 'out'");
      seg.in_scope = scope == "in";
      spec.segments.push_back(std::move(seg));
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.validate();
    return spec;
  } catch (const ordered_json::exception& e) {
    throw InvalidConfigError(std::string("malformed scenario JSON: ") + e.what());
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "k,measure,tpr,fpr\n";
  for (const auto& row : rows)
    for (DistanceMeasure m : kAllMeasures)
      out << format_double(row.k) << ',' << measure_name(m) << ','
          << format_double(row.tpr[measure_index(m)]) << ','
          << format_double(row.fpr[measure_index(m)]) << '\n';
}

}  // namespace scopeguard
