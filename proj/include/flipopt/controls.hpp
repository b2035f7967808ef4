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
#include <vector>

#include "flipopt/scenario.hpp"

namespace flipopt {

/// Unbounded optimisation variables, one pair per integration step.
struct RawControls {
    std::vector<double> thrust;
    std::vector<double> gimbal;

    RawControls() = default;
    explicit RawControls(int steps) : thrust(steps, 0.0), gimbal(steps, 0.0) {}
    int steps() const { return static_cast<int>(thrust.size()); }

    bool operator==(const RawControls&) const = default;
};

/// Bounded per-step commands in reference units (thrust) and radians (gimbal).
struct ControlSequence {
    std::vector<double> thrust;
    std::vector<double> gimbal;

    int steps() const { return static_cast<int>(thrust.size()); }
    bool operator==(const ControlSequence&) const = default;
};

/// Squashing magnitude above which a raw parameter is considered saturated.
inline constexpr double kSaturationGuard = 6.0;

double logistic(double x);

/// T = T_min + (T_max - T_min) * logistic(u_T),  delta = delta_max * tanh(u_delta).
/// Throws NumericalError with the index of the first non-finite raw value.
ControlSequence reparameterize(const RawControls& raw, const NondimScenario& scn);

/// Elementwise derivatives dT/du_T and d delta/du_delta at `raw`.
ControlSequence reparameterize_slopes(const RawControls& raw, const NondimScenario& scn);

/// Inverse map; commands at or beyond a bound map to a large finite value.
RawControls unsquash(const ControlSequence& seq, const NondimScenario& scn);

/// Sum of squared step-to-step changes, normalised by the actuator ranges.
double smoothness_penalty(const ControlSequence& seq, const NondimScenario& scn);

/// Adds d(smoothness)/dT_k and d(smoothness)/d delta_k into the provided arrays.
void smoothness_gradient(const ControlSequence& seq, const NondimScenario& scn, double weight,
                         std::vector<double>& d_thrust, std::vector<double>& d_gimbal);

/// Hover throttle for the initial weight, zero gimbal.
RawControls initial_raw_controls(const NondimScenario& scn);

/// Raw entries drawn uniformly from [-scale, scale), thrust then gimbal per step.
/// The stream depends only on the seed (mt19937_64, top 53 bits).
RawControls random_raw_controls(int steps, std::uint64_t seed, double scale = 2.0);

/// Count of raw entries with |u| > kSaturationGuard.
int count_saturated(const RawControls& raw);

/// Throws ConfigError if any command is outside the actuator limits.
void check_bounds(const ControlSequence& seq, const NondimScenario& scn);

}  // namespace flipopt
