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
#include <string>

namespace flipopt {

using Vec2 = std::array<double, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Scales used to make the equations of motion dimensionless.
struct ReferenceQuantities {
    double length_m = 50.0;
    double speed_mps = 335.57;
    double mass_kg = 24000.0;
    double density_kgpm3 = 1.225;
    double gravity_mps2 = 9.80665;

    /// Always derived, never stored.
    double time_s() const { return length_m / speed_mps; }
    double force_N() const { return mass_kg * speed_mps * speed_mps / length_m; }
    double moment_Nm() const { return mass_kg * speed_mps * speed_mps; }
    double inertia_kgm2() const { return mass_kg * length_m * length_m; }
};

struct VehicleParams {
    double inertia_kgm2 = 1.25e7;
    double isp_s = 350.0;
    double wet_mass_kg = 135000.0;
    double dry_mass_kg = 120000.0;
    double cg_frac = 0.60;            ///< cg distance from nose tip, fraction of length
    double max_thrust_N = 2300e3;
    double min_throttle_frac = 0.25;
    double max_gimbal_deg = 10.0;
    double actuator_lag_s = 0.1;
    double force_correction = 1.0;   ///< scales aerodynamic force
    double moment_correction = 1.0;  ///< scales aerodynamic moment
    double ref_area_m2 = 450.0;
};

struct BoundaryConditions {
    Vec2 r0_m{0.0, 0.0};
    Vec2 v0_mps{-18.82, -106.73};
    Vec2 a0_mps2{0.0, 0.0};  ///< recorded, not enforced
    double theta0_deg = 170.0;
    double omega0_radps = 0.0;
    Vec2 rf_m{-360.0, -1200.0};
    Vec2 vf_mps{0.0, -0.1};
    double thetaf_deg = 90.0;
    double omegaf_radps = 0.0;
    double flip_deadline_s = 2.4;
};

enum class AeroKind { simplified, surrogate, none };

struct AeroConfig {
    AeroKind kind = AeroKind::simplified;
    double drag_coeff = 1.0;
    double cp_frac = 0.55;
    /// File path, or "builtin:<name>" for weights compiled into the library.
    std::string weights_path;
};

struct LossWeights {
    double position = 1.0;
    double velocity = 1.0;
    double pitch = 1.0;
    double omega = 1.0;
    double smooth = 0.01;
    double mass = 10.0;
    double flip = 0.1;
};

enum class GradientEngine { bptt, adjoint, finite_diff };

struct OptimizerConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr_max = 1e-3;
    double lr_min = 1e-5;
    int n_steps = 5000;
    GradientEngine engine = GradientEngine::bptt;  ///< bptt or adjoint
    int log_every = 0;
    double clip_grad_inf = 0.0;  ///< 0 disables clipping
    int checkpoint_slots = 8;    ///< adjoint engine snapshot budget
};

struct ScenarioConfig {
    std::string name = "custom";
    ReferenceQuantities refs;
    VehicleParams vehicle;
    BoundaryConditions bc;
    int steps = 90;
    double dt_s = 15.0 / 90.0;
    AeroConfig aero;
    LossWeights loss_weights;
    OptimizerConfig opt;
    std::uint64_t seed = 0;

    double horizon_s() const { return dt_s * steps; }
};

/// Throws ConfigError naming the first violated field.
void validate(const ScenarioConfig& config);

/// Changes the step count while keeping dt, so the horizon scales with K.
void set_step_count(ScenarioConfig& config, int steps);

/// Everything the integrator needs, expressed in reference units.
struct NondimScenario {
    int steps = 0;
    double dt = 0.0;
    double gravity = 0.0;
    double exhaust_speed = 0.0;  ///< I_sp * g0 / v_ref
    double inertia = 0.0;
    double wet_mass = 0.0;
    double dry_mass = 0.0;
    double max_thrust = 0.0;
    double min_thrust = 0.0;
    double max_gimbal = 0.0;
    double actuator_lag = 0.0;
    double cg = 0.0;        ///< from nose, in reference lengths
    double engine_arm = 0.0;  ///< cg to engine gimbal point
    double density = 0.0;
    double ref_area = 0.0;
    double force_correction = 1.0;
    double moment_correction = 1.0;
    Vec2 r0{}, v0{};
    double theta0 = 0.0, omega0 = 0.0;
    Vec2 rf{}, vf{};
    double thetaf = 0.0, omegaf = 0.0;
    double flip_deadline = 0.0;
    LossWeights weights;
};

NondimScenario nondimensionalize(const ScenarioConfig& config);

// Built-in presets reproducing the flip-landing parameter table.
ScenarioConfig preset_case1();
ScenarioConfig preset_case2();

}  // namespace flipopt
