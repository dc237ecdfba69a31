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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "scopeguard/calibrate.hpp"
#include "scopeguard/distances.hpp"
#include "scopeguard/monitor.hpp"
#include "scopeguard/power.hpp"
#include "scopeguard/synth.hpp"

namespace scopeguard {

using ordered_json = nlohmann::ordered_json;

// JSON codecs for every persisted artifact. Key order is fixed so repeated
// runs emit byte-identical files; doubles render shortest-round-trip, so
// save/load is lossless.

ordered_json plan_to_json(const SampleSizePlan& plan);

/// Flat report: ks, cvm, ad, ws, p_* (only when present), n, m.
ordered_json report_to_json(const DistanceReport& report);

ordered_json artifact_to_json(const CalibrationArtifact& artifact);
CalibrationArtifact artifact_from_json(const ordered_json& j);
void save_artifact(const std::filesystem::path& path,
                   const CalibrationArtifact& artifact);
CalibrationArtifact load_artifact(const std::filesystem::path& path);

ordered_json verdict_to_json(const Verdict& verdict,
                             const std::vector<DistanceMeasure>& measures);

ordered_json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const ordered_json& j);

/// Sweep rows as CSV with header `k,measure,tpr,fpr`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace scopeguard
