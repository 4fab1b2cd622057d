// Copyright 2026 The busqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "busqed/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace busqed {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class OutputFormat { csv, json };
OutputFormat output_format_from_string(const std::string& s);

// Reads a JSON device/simulation config (schema: bus.{freq_ghz,kappa_inv_us},
// resonators[].{label,freq_ghz,g_mhz,kappa_inv_us},
// sim.{dt_ns,t_max_ns,frame,fock_dim,gprime_formula}) or a run manifest
// written by this tool, and builds the standard scenario for it. All lab
// units are converted to angular rad/s and seconds here, exactly once.
// Unknown keys are rejected; errors name the offending key path.
Scenario parse_config(const std::string& path);
Scenario parse_config_text(const std::string& text, const std::string& name);

// Inverse of parse_config for the standard scenario family.
std::string serialize_config(const Scenario& s);

// Everything needed to reproduce a run: resolved config, scenario name,
// formula variant, frame, basis, plus result metadata.
struct RunManifest {
    std::string artifact_version{kArtifactVersion};
    std::string scenario;
    std::string config_json;  // serialized config, reparseable
    std::string basis_kind;   // "full" | "sector"
    std::string frame;
    std::string gprime_formula;
    std::string phase_argmax;  // label of the numerically realized Bell phase
    std::vector<OptimumPoint> optima;
    std::vector<std::string> warnings;
    double duration_seconds = 0.0;
    std::vector<std::string> outputs;
    std::optional<GPrimeResolution> gprime_resolution;
};

RunManifest make_manifest(const Scenario& s, const ScenarioResult& r);
void write_manifest(const RunManifest& m, const std::string& path);

// CSV columns: t_ns, one P_<label> per population, one F_<label> per fidelity
// target; 12 significant digits, LF line endings, bit-reproducible for a
// fixed manifest. JSON mirrors the same columns plus the manifest.
void emit_timeseries(const ScenarioResult& r, const std::string& path, OutputFormat format);
void emit_timeseries(const ScenarioResult& r, const std::string& path, OutputFormat format,
                     const RunManifest& manifest);

// CLI entry point (subcommands run, sweep, list-scenarios, check).
// Exit codes: 0 success, 1 validation error, 2 integrator-invariant failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace busqed
