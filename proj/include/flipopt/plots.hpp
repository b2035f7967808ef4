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

#include <string>
#include <vector>

namespace flipopt {

struct PlotReport {
    std::vector<std::string> files;  ///< written SVG paths
    double flip_y_over_L = 0.0;      ///< y / L_ref where |omega| peaks
    double flip_time_s = 0.0;
    double peak_reduced_frequency = 0.0;
};

/// Reads `run_dir`/trajectory.csv (and scenario.json when present for L_ref and
/// the cg position) and writes three SVG figures into the same directory:
///   time_histories.svg     thrust, gimbal, horizontal and vertical velocity
///   pose.svg               path with the body axis drawn to scale
///   flight_parameters.svg  engine torque, mass, pitch, omega, AoA, reduced frequency
/// Reduced frequency is omega * L_ref / (2 |v|). Throws ConfigError when the
/// trajectory is empty or lacks a column.
PlotReport emit_plots(const std::string& run_dir);

}  // namespace flipopt
