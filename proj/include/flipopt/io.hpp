/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flipopt/aero.hpp"
#include "flipopt/optimizer.hpp"
#include "flipopt/rollout.hpp"
#include "flipopt/scenario.hpp"

namespace flipopt {

// ---- scenario files -------------------------------------------------------

/// Names accepted by load_scenario in place of a path.
std::vector<std::string> preset_names();

/// Embedded JSON text of a preset. Throws ConfigError for unknown names.
const std::string& preset_json(const std::string& name);

/// Parses a scenario document. Keys missing from the document take the values of
/// the preset named by its "preset" key (case1 when absent). `source` is used in
/// diagnostics; relative weight paths are resolved against `base_dir`.
ScenarioConfig scenario_from_json(const std::string& text, const std::string& source = "<string>",
                                  const std::string& base_dir = "");

/// Preset name or path to a JSON file.
ScenarioConfig load_scenario(const std::string& path_or_preset);

/// Complete document; scenario_from_json(scenario_to_json(c)) == c field for field.
std::string scenario_to_json(const ScenarioConfig& config);

/// Builds the aerodynamic model a scenario asks for, loading surrogate weights.
AeroModel make_aero(const ScenarioConfig& config);

// ---- surrogate weights ----------------------------------------------------

std::string weights_to_json(const MlpSurrogate& model);
MlpSurrogate weights_from_json(const std::string& text, const std::string& source = "<string>");
/// File path or "builtin:<name>".
MlpSurrogate load_weights(const std::string& path);

std::string dataset_csv(const std::vector<CoeffSample>& samples);

// ---- run artefacts (dimensional SI) ---------------------------------------

std::string trajectory_csv(const Trajectory& traj, const ScenarioConfig& config);
std::string controls_csv(const ControlSequence& controls, const ScenarioConfig& config);
std::string loss_history_csv(const std::vector<LossRecord>& history);

/// Reads a controls CSV back into reference units. Throws ConfigError when the
/// row count differs from `expected_steps` or a value breaks the actuator limits.
ControlSequence parse_controls_csv(const std::string& text, const ScenarioConfig& config,
                                   int expected_steps);

/// Minimal numeric CSV table: header names plus column-major values.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  ///< NaN for empty cells

    int rows() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
    /// Column by name, or nullptr.
    const std::vector<double>* column(const std::string& name) const;
};
CsvTable parse_csv(const std::string& text, const std::string& source = "<string>");

/// Terminal state compared against the targets, in SI units.
struct TerminalResiduals {
    double position_error_m = 0.0;     ///< |r_K - r_f|
    double velocity_error_mps = 0.0;   ///< |v_K - v_f|
    double speed_error_mps = 0.0;      ///< | |v_K| - |v_f| |
    double pitch_error_deg = 0.0;      ///< theta_K - theta_f
    double omega_radps = 0.0;          ///< omega_K
    double min_mass_kg = 0.0;          ///< over all K + 1 states
    double flip_y_over_L = 0.0;        ///< y / L_ref at peak |omega|
    double flip_time_s = 0.0;
};
TerminalResiduals terminal_residuals(const Trajectory& traj, const ScenarioConfig& config);

// ---- files ----------------------------------------------------------------

std::string read_file(const std::string& path);
/// Writes atomically enough for our purposes: truncate, write, check.
void write_file(const std::string& path, const std::string& content);
/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

/// "%.17g", the shortest format that always round-trips a double.
std::string fmt_double(double x);

}  // namespace flipopt
