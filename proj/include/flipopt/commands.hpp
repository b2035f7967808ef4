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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flipopt/gradients.hpp"
#include "flipopt/io.hpp"
#include "flipopt/optimizer.hpp"
#include "flipopt/plots.hpp"
#include "flipopt/scenario.hpp"

namespace flipopt {

inline constexpr const char* kVersion = "0.3.0";

/// Smallest dataset train_aero accepts.
inline constexpr int kMinAeroSamples = 4;

/// Engine-equivalence threshold, relative to mean magnitude.
inline constexpr double kEngineMaeTolerance = 5e-3;

struct FileDigest {
    std::string path;  ///< absolute for inputs, relative to the manifest for outputs
    std::string fnv1a;
};

/// Everything needed to re-run a command and check its outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::string scenario_json;  ///< resolved snapshot; empty for train-aero
    std::uint64_t seed = 0;
    std::string version = kVersion;
    std::map<std::string, std::string> params;  ///< command options other than the scenario
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text, const std::string& source = "<string>");

/// Result of optimize and simulate.
struct RunResult {
    std::string command;
    std::string engine;  ///< "none" for simulate
    Trajectory trajectory;
    LossBreakdown loss;
    TerminalResiduals residuals;
    bool residuals_finite = false;
    int best_step = -1;
    int iterations = 0;
    int saturated_params = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
    std::vector<std::string> files;
};

/// Optimizes, writes controls.csv, then re-simulates the controls as read back
/// from that file so the written trajectory is exactly what `simulate` replays.
/// With an empty `out_dir` nothing is written. On a non-finite loss the raw
/// iterate is stored in abort_snapshot.json before OptimizationAborted propagates.
RunResult run_optimize(const ScenarioConfig& config, const std::string& out_dir,
                       const std::vector<std::string>& argv,
                       const ProgressCallback& progress = {});

/// Rolls out a controls CSV. `no_aero` switches the aerodynamic model off.
RunResult run_simulate(ScenarioConfig config, const std::string& controls_path, bool no_aero,
                       const std::string& out_dir, const std::vector<std::string>& argv);

struct FitReport {
    int samples = 0;
    std::uint64_t seed = 0;
    int epochs = 0;
    double mse = 0.0;
    std::array<double, 3> max_abs_error{};  ///< C_L, C_D, C_M at the training angles
    std::vector<std::string> files;
};

/// Generates the stand-in dataset, trains the surrogate and writes
/// <out>, <stem>.dataset.csv, <stem>.fit.json and <stem>.manifest.json.
FitReport run_train_aero(int samples, std::uint64_t seed, const std::string& weights_out,
                         const std::vector<std::string>& argv);

struct GradCheckResult {
    GradientEngine engine = GradientEngine::bptt;
    int steps = 0;
    std::uint64_t seed = 0;
    double loss = 0.0;
    GradientComparison comparison;
    double engine_seconds = 0.0;
    double fd_seconds = 0.0;
    std::vector<std::string> files;
};

/// Compares `engine` with central differences at a seeded random raw point.
/// `corrupt_index` >= 0 perturbs that entry of the engine gradient by one part
/// in a thousand, to exercise the failure path.
GradCheckResult run_check_grad(const ScenarioConfig& config, GradientEngine engine,
                               std::uint64_t seed, int corrupt_index, const std::string& out_dir,
                               const std::vector<std::string>& argv);

struct EngineSide {
    GradientEngine engine = GradientEngine::bptt;
    LossBreakdown loss;
    TerminalResiduals residuals;
    double gradient_seconds = 0.0;
    double optimize_seconds = 0.0;
    std::size_t peak_aux_bytes = 0;
};

struct EngineComparison {
    EngineSide a, b;
    int steps = 0;
    double gradient_mae = 0.0;    ///< worst of the initial and the seeded random point
    double controls_mae = 0.0;    ///< worst channel: thrust, gimbal
    double trajectory_mae = 0.0;  ///< worst state channel
    std::string worst_trajectory_channel;
    double tolerance = kEngineMaeTolerance;
    bool passed = false;
    std::vector<std::string> files;
};

/// Gradients of both engines at the same points, then two independent
/// optimizations compared channel by channel.
EngineComparison run_compare_engines(const ScenarioConfig& config, GradientEngine a,
                                     GradientEngine b, const std::string& out_dir,
                                     const std::vector<std::string>& argv,
                                     const ProgressCallback& progress = {});

struct ReplayCheck {
    std::string file;
    std::string expected;
    std::string actual;
    bool match = false;
};

struct ReplayReport {
    std::string command;
    std::vector<ReplayCheck> checks;  ///< CSV outputs only
    bool all_match = false;
};

/// Re-runs the command recorded in a manifest into `out_dir` and compares every
/// CSV output byte for byte. Throws ConfigError if a recorded input has changed.
ReplayReport run_replay(const std::string& manifest_path, const std::string& out_dir,
                        const std::vector<std::string>& argv);

}  // namespace flipopt
