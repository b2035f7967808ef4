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

#include "flipopt/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace flipopt {

Trajectory simulate(const ControlSequence& controls, const NondimScenario& scn,
                    const AeroModel& aero) {
    const int K = controls.steps();
    Trajectory traj;
    traj.dt = scn.dt;
    traj.controls = controls;
    traj.states.reserve(K + 1);
    traj.aero_log.reserve(K);
    traj.alpha_log.reserve(K);
    traj.still_air.reserve(K);
    traj.states.push_back(initial_state(scn));
    for (int k = 0; k < K; ++k) {
        const VehicleState& s = traj.states.back();
        traj.aero_log.push_back(aero_forces(s, aero, scn));
        traj.alpha_log.push_back(angle_of_attack(s));
        traj.still_air.push_back(s.u() * s.u() + s.v() * s.v() < kStillAir * kStillAir);
        VehicleState next =
            rk4_step(s, {controls.thrust[k], controls.gimbal[k]}, aero, scn.dt, scn, k);
        for (int i = 0; i < kStateDim; ++i) {
            if (!std::isfinite(next[i]))
                throw NumericalError("non-finite " + std::string(kStateNames[i]) + " after step " +
                                         std::to_string(k),
                                     k, kStateNames[i]);
        }
        traj.states.push_back(next);
    }
    return traj;
}

Trajectory rollout(const RawControls& raw, const NondimScenario& scn, const AeroModel& aero) {
    return simulate(reparameterize(raw, scn), scn, aero);
}

namespace {

bool past_flip_deadline(int k, const NondimScenario& scn) {
    return k * scn.dt > scn.flip_deadline;
}

}  // namespace

LossBreakdown loss(const Trajectory& traj, const NondimScenario& scn) {
    const LossWeights& w = scn.weights;
    LossBreakdown out;
    auto& t = out.terms;
    const VehicleState& end = traj.states.back();
    const double dx = end.x() - scn.rf[0];
    const double dy = end.y() - scn.rf[1];
    const double du = end.u() - scn.vf[0];
    const double dv = end.v() - scn.vf[1];
    const double dth = end.theta() - scn.thetaf;
    const double dom = end.omega() - scn.omegaf;
    t[static_cast<int>(LossTerm::terminal_position)] = w.position * (dx * dx + dy * dy);
    t[static_cast<int>(LossTerm::terminal_velocity)] = w.velocity * (du * du + dv * dv);
    t[static_cast<int>(LossTerm::terminal_pitch)] = w.pitch * dth * dth;
    t[static_cast<int>(LossTerm::terminal_omega)] = w.omega * dom * dom;
    t[static_cast<int>(LossTerm::smoothness)] = w.smooth * smoothness_penalty(traj.controls, scn);

    double mass = 0.0;
    double flip = 0.0;
    for (int k = 0; k < static_cast<int>(traj.states.size()); ++k) {
        const VehicleState& s = traj.states[k];
        const double short_fall = std::max(0.0, scn.dry_mass - s.m());
        mass += short_fall * short_fall;
        if (past_flip_deadline(k, scn)) {
            const double e = s.theta() - scn.thetaf;
            flip += e * e;
        }
    }
    t[static_cast<int>(LossTerm::mass_floor)] = w.mass * mass;
    t[static_cast<int>(LossTerm::flip_deadline)] = w.flip * flip;

    for (double x : t) out.total += x;
    return out;
}

VehicleState loss_state_partial(const VehicleState& s, int k, const NondimScenario& scn) {
    const LossWeights& w = scn.weights;
    VehicleState g;
    if (k == scn.steps) {
        g.x() = 2.0 * w.position * (s.x() - scn.rf[0]);
        g.y() = 2.0 * w.position * (s.y() - scn.rf[1]);
        g.u() = 2.0 * w.velocity * (s.u() - scn.vf[0]);
        g.v() = 2.0 * w.velocity * (s.v() - scn.vf[1]);
        g.theta() = 2.0 * w.pitch * (s.theta() - scn.thetaf);
        g.omega() = 2.0 * w.omega * (s.omega() - scn.omegaf);
    }
    const double short_fall = std::max(0.0, scn.dry_mass - s.m());
    g.m() = -2.0 * w.mass * short_fall;
    if (past_flip_deadline(k, scn)) g.theta() += 2.0 * w.flip * (s.theta() - scn.thetaf);
    return g;
}

double evaluate_loss(const RawControls& raw, const NondimScenario& scn, const AeroModel& aero) {
    return loss(rollout(raw, scn, aero), scn).total;
}

SiState redimensionalize(const VehicleState& s, const ReferenceQuantities& refs) {
    const double L = refs.length_m;
    const double V = refs.speed_mps;
    const double T = refs.time_s();
    return {s.x() * L, s.y() * L, s.theta(), s.u() * V, s.v() * V, s.omega() / T,
            s.m() * refs.mass_kg, s.delta_d()};
}

VehicleState nondimensionalize_state(const SiState& s, const ReferenceQuantities& refs) {
    const double L = refs.length_m;
    const double V = refs.speed_mps;
    const double T = refs.time_s();
    VehicleState out;
    out.x() = s.x_m / L;
    out.y() = s.y_m / L;
    out.theta() = s.theta_rad;
    out.u() = s.u_mps / V;
    out.v() = s.v_mps / V;
    out.omega() = s.omega_radps * T;
    out.m() = s.mass_kg / refs.mass_kg;
    out.delta_d() = s.delta_d_rad;
    return out;
}

}  // namespace flipopt
