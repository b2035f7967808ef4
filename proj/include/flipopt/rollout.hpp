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
#include <string>
#include <vector>

#include "flipopt/aero.hpp"
#include "flipopt/controls.hpp"
#include "flipopt/dynamics.hpp"
#include "flipopt/error.hpp"

namespace flipopt {

/// Full record of one rollout, in reference units.
struct Trajectory {
    std::vector<VehicleState> states;  ///< K + 1 entries
    ControlSequence controls;          ///< K entries
    std::vector<AeroForces> aero_log;  ///< aerodynamic loads at each step start
    std::vector<double> alpha_log;     ///< angle of attack at each step start
    std::vector<bool> still_air;       ///< speed below threshold at step start
    double dt = 0.0;

    int steps() const { return controls.steps(); }
};

/// Rolls the bounded commands forward from the scenario's initial state.
/// Throws NumericalError(step, field) when a state becomes non-finite.
Trajectory simulate(const ControlSequence& controls, const NondimScenario& scn,
                    const AeroModel& aero);

/// simulate(reparameterize(raw)).
Trajectory rollout(const RawControls& raw, const NondimScenario& scn, const AeroModel& aero);

enum class LossTerm : int {
    terminal_position = 0,
    terminal_velocity,
    terminal_pitch,
    terminal_omega,
    smoothness,
    mass_floor,
    flip_deadline,
};
inline constexpr int kLossTerms = 7;
inline constexpr std::array<const char*, kLossTerms> kLossTermNames = {
    "terminal_position", "terminal_velocity", "terminal_pitch", "terminal_omega",
    "smoothness",        "mass_floor",        "flip_deadline"};

struct LossBreakdown {
    double total = 0.0;
    std::array<double, kLossTerms> terms{};  ///< already weighted

    double operator[](LossTerm t) const { return terms[static_cast<int>(t)]; }
};

/// Weighted terminal and path penalties of a trajectory.
LossBreakdown loss(const Trajectory& traj, const NondimScenario& scn);

/// Partial derivative of the state-dependent loss terms with respect to state k.
VehicleState loss_state_partial(const VehicleState& s, int k, const NondimScenario& scn);

/// Shorthand for loss(rollout(raw)).total.
double evaluate_loss(const RawControls& raw, const NondimScenario& scn, const AeroModel& aero);

/// Redimensionalised copy of one state: SI units, angles in radians.
struct SiState {
    double x_m, y_m, theta_rad, u_mps, v_mps, omega_radps, mass_kg, delta_d_rad;
};
SiState redimensionalize(const VehicleState& s, const ReferenceQuantities& refs);
VehicleState nondimensionalize_state(const SiState& s, const ReferenceQuantities& refs);

}  // namespace flipopt
