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

#include "flipopt/scenario.hpp"

#include <cmath>

#include "flipopt/error.hpp"

namespace flipopt {
namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
}

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

void validate(const ScenarioConfig& c) {
    const auto& r = c.refs;
    require(finite_all({r.length_m, r.speed_mps, r.mass_kg, r.density_kgpm3, r.gravity_mps2}),
            "refs", "non-finite reference quantity");
    require(r.length_m > 0, "refs.L_ref_m", "must be > 0");
    require(r.speed_mps > 0, "refs.v_ref_mps", "must be > 0");
    require(r.mass_kg > 0, "refs.m_ref_kg", "must be > 0");
    require(r.density_kgpm3 > 0, "refs.rho_kgpm3", "must be > 0");
    require(r.gravity_mps2 > 0, "refs.g0_mps2", "must be > 0");

    const auto& v = c.vehicle;
    require(v.inertia_kgm2 > 0, "vehicle.J_z_kgm2", "must be > 0");
    require(v.isp_s > 0, "vehicle.I_sp_s", "must be > 0");
    require(v.dry_mass_kg > 0, "vehicle.m_dry_kg", "must be > 0");
    require(v.dry_mass_kg < v.wet_mass_kg, "vehicle.m_dry_kg", "m_dry must be < m_wet");
    require(v.cg_frac > 0 && v.cg_frac < 1, "vehicle.l_cg_frac", "must lie in (0, 1)");
    require(v.max_thrust_N > 0, "vehicle.T_max_N", "must be > 0");
    require(v.min_throttle_frac > 0 && v.min_throttle_frac < 1, "vehicle.throttle_min_frac",
            "must lie in (0, 1)");
    require(v.max_gimbal_deg > 0, "vehicle.delta_max_deg", "must be > 0");
    require(v.actuator_lag_s > 0, "vehicle.T_d_s", "must be > 0");
    require(v.ref_area_m2 > 0, "vehicle.S_ref_m2", "must be > 0");
    require(std::isfinite(v.force_correction), "vehicle.eps_corr", "must be finite");
    require(std::isfinite(v.moment_correction), "vehicle.eta_corr", "must be finite");

    const auto& bc = c.bc;
    require(finite_all({bc.r0_m[0], bc.r0_m[1], bc.v0_mps[0], bc.v0_mps[1], bc.theta0_deg,
                        bc.omega0_radps, bc.rf_m[0], bc.rf_m[1], bc.vf_mps[0], bc.vf_mps[1],
                        bc.thetaf_deg, bc.omegaf_radps, bc.flip_deadline_s}),
            "bc", "non-finite boundary condition");
    require(bc.flip_deadline_s >= 0, "bc.t_flip_max_s", "must be >= 0");

    require(c.steps >= 1, "K", "must be >= 1");
    require(std::isfinite(c.dt_s) && c.dt_s > 0, "t_f_s", "horizon must be > 0");

    if (c.aero.kind == AeroKind::simplified) {
        require(c.aero.drag_coeff >= 0, "aero.C_D", "must be >= 0");
        require(c.aero.cp_frac > 0 && c.aero.cp_frac < 1, "aero.l_cp_frac", "must lie in (0, 1)");
    }
    if (c.aero.kind == AeroKind::surrogate)
        require(!c.aero.weights_path.empty(), "aero.weights_path", "required for surrogate aero");

    const auto& w = c.loss_weights;
    require(w.position >= 0 && w.velocity >= 0 && w.pitch >= 0 && w.omega >= 0 &&
                w.smooth >= 0 && w.mass >= 0 && w.flip >= 0,
            "loss_weights", "all weights must be >= 0");

    const auto& o = c.opt;
    require(o.beta1 >= 0 && o.beta1 < 1, "opt.beta1", "must lie in [0, 1)");
    require(o.beta2 >= 0 && o.beta2 < 1, "opt.beta2", "must lie in [0, 1)");
    require(o.eps > 0, "opt.eps", "must be > 0");
    require(o.lr_min > 0, "opt.lr_min", "must be > 0");
    require(o.lr_max >= o.lr_min, "opt.lr_max", "must be >= lr_min");
    require(o.n_steps >= 1, "opt.n_steps", "must be >= 1");
    require(o.log_every >= 0, "opt.log_every", "must be >= 0");
    require(o.clip_grad_inf >= 0, "opt.clip_grad_inf", "must be >= 0");
    require(o.checkpoint_slots >= 1, "opt.checkpoint_slots", "must be >= 1");
}

void set_step_count(ScenarioConfig& config, int steps) {
    if (steps < 1) throw ConfigError("K", "must be >= 1");
    config.steps = steps;
}

NondimScenario nondimensionalize(const ScenarioConfig& c) {
    validate(c);
    const auto& r = c.refs;
    const double L = r.length_m;
    const double V = r.speed_mps;
    const double M = r.mass_kg;
    const double t_ref = r.time_s();
    const double F = r.force_N();

    NondimScenario s;
    s.steps = c.steps;
    s.dt = c.dt_s / t_ref;
    s.gravity = r.gravity_mps2 * L / (V * V);
    s.exhaust_speed = c.vehicle.isp_s * r.gravity_mps2 / V;
    s.inertia = c.vehicle.inertia_kgm2 / r.inertia_kgm2();
    s.wet_mass = c.vehicle.wet_mass_kg / M;
    s.dry_mass = c.vehicle.dry_mass_kg / M;
    s.max_thrust = c.vehicle.max_thrust_N / F;
    s.min_thrust = s.max_thrust * c.vehicle.min_throttle_frac;
    s.max_gimbal = c.vehicle.max_gimbal_deg * kDegToRad;
    s.actuator_lag = c.vehicle.actuator_lag_s / t_ref;
    s.cg = c.vehicle.cg_frac;
    // Engine gimbal point sits at the base of the vehicle, on the body axis.
    s.engine_arm = 1.0 - c.vehicle.cg_frac;
    s.density = r.density_kgpm3 * L * L * L / M;
    s.ref_area = c.vehicle.ref_area_m2 / (L * L);
    s.force_correction = c.vehicle.force_correction;
    s.moment_correction = c.vehicle.moment_correction;

    const auto& bc = c.bc;
    s.r0 = {bc.r0_m[0] / L, bc.r0_m[1] / L};
    s.v0 = {bc.v0_mps[0] / V, bc.v0_mps[1] / V};
    s.theta0 = bc.theta0_deg * kDegToRad;
    s.omega0 = bc.omega0_radps * t_ref;
    s.rf = {bc.rf_m[0] / L, bc.rf_m[1] / L};
    s.vf = {bc.vf_mps[0] / V, bc.vf_mps[1] / V};
    s.thetaf = bc.thetaf_deg * kDegToRad;
    s.omegaf = bc.omegaf_radps * t_ref;
    s.flip_deadline = bc.flip_deadline_s / t_ref;
    s.weights = c.loss_weights;
    return s;
}

}  // namespace flipopt
