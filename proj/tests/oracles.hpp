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

// Closed-form references for the integrator, shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>

#include "flipopt/dynamics.hpp"
#include "flipopt/io.hpp"
#include "flipopt/rollout.hpp"

namespace oracle {

using namespace flipopt;

/// Zero thrust, no aero: ballistic flight with constant pitch.
/// Returns the largest relative error over all steps and states.
inline double projectile_error(int steps = 90) {
    ScenarioConfig c = preset_case1();
    set_step_count(c, steps);
    c.bc.omega0_radps = 0.0;
    const NondimScenario s = nondimensionalize(c);
    ControlSequence zero;
    zero.thrust.assign(steps, 0.0);
    zero.gimbal.assign(steps, 0.0);
    const Trajectory t = simulate(zero, s, NoAero{});
    double worst = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double tk = k * s.dt;
        const VehicleState& q = t.states[k];
        const double exact[] = {s.r0[0] + s.v0[0] * tk,
                                s.r0[1] + s.v0[1] * tk - 0.5 * s.gravity * tk * tk,
                                s.theta0,
                                s.v0[0],
                                s.v0[1] - s.gravity * tk,
                                0.0,
                                s.wet_mass,
                                0.0};
        for (int i = 0; i < kStateDim; ++i)
            worst = std::max(worst, std::abs(q[i] - exact[i]) / std::max(1.0, std::abs(exact[i])));
    }
    return worst;
}

/// Step response of the first-order gimbal lag, in radians, at dt = T_d / divisions.
inline double lag_error(int divisions = 10) {
    ScenarioConfig c = preset_case1();
    c.dt_s = c.vehicle.actuator_lag_s / divisions;
    const int steps = 20 * divisions;  // twenty time constants
    set_step_count(c, steps);
    const NondimScenario s = nondimensionalize(c);
    ControlSequence u;
    u.thrust.assign(steps, 0.0);
    u.gimbal.assign(steps, s.max_gimbal);
    const Trajectory t = simulate(u, s, NoAero{});
    double worst = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double exact = s.max_gimbal * (1.0 - std::exp(-k * s.dt / s.actuator_lag));
        worst = std::max(worst, std::abs(t.states[k].delta_d() - exact));
    }
    return worst;
}

/// Quadratic drag on a body aligned with the flow, no gravity and no thrust,
/// so that u' = -c u^2 with u(t) = u0 / (1 + c u0 t).
/// Returns error(dt) / error(dt / 2) at the final time.
inline double rk4_halving_ratio(int steps = 20) {
    NondimScenario s = nondimensionalize(preset_case1());
    s.gravity = 0.0;
    s.theta0 = 0.0;
    s.omega0 = 0.0;
    s.v0 = {1.0, 0.0};
    s.density = 1.0;
    s.ref_area = 2.0;
    s.wet_mass = 1.0;
    const SimplifiedAero drag{1.0, 0.55};
    const double c = 0.5 * s.density * drag.drag_coeff * s.ref_area / s.wet_mass;
    const double horizon = 2.0;
    auto final_error = [&](int n) {
        NondimScenario t = s;
        t.steps = n;
        t.dt = horizon / n;
        ControlSequence off;
        off.thrust.assign(n, 0.0);
        off.gimbal.assign(n, 0.0);
        const Trajectory tr = simulate(off, t, drag);
        const double exact = s.v0[0] / (1.0 + c * s.v0[0] * horizon);
        return std::abs(tr.states.back().u() - exact);
    };
    return final_error(steps) / final_error(2 * steps);
}

}  // namespace oracle
