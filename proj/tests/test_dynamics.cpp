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

#include <doctest.h>

#include <cmath>

#include "flipopt/dynamics.hpp"
#include "flipopt/io.hpp"
#include "flipopt/rollout.hpp"
#include "oracles.hpp"

using namespace flipopt;

namespace {

double aoa_deg(double u, double v, double theta_deg) {
    VehicleState s;
    s.u() = u;
    s.v() = v;
    s.theta() = theta_deg * kDegToRad;
    return angle_of_attack(s) * kRadToDeg;
}

}  // namespace

TEST_CASE("gimbal moment at full deflection") {
    const ScenarioConfig c = preset_case1();
    const NondimScenario s = nondimensionalize(c);
    const ThrustLoad<double> t = thrust_force_and_moment(s.max_thrust, s.max_gimbal, 0.0, s);
    // T_max sin(10 deg) (1 - l_cg) L
    const double expected = 2.3e6 * std::sin(10.0 * kPi / 180.0) * 0.4 * 50.0;
    CHECK(expected == doctest::Approx(7.99e6).epsilon(1e-3));
    CHECK(-t.moment * c.refs.moment_Nm() == doctest::Approx(expected).epsilon(1e-12));
    // Force along theta + delta
    CHECK(t.fy / t.fx == doctest::Approx(std::tan(s.max_gimbal)));
}

TEST_CASE("propellant mass flow") {
    const ScenarioConfig c = preset_case1();
    const NondimScenario s = nondimensionalize(c);
    const VehicleState x = initial_state(s);
    const VehicleState d = rhs(x, ControlInput{s.max_thrust, 0.0}, AeroForces{}, s);
    const double mdot = d.m() * c.refs.mass_kg / c.refs.time_s();
    CHECK(mdot == doctest::Approx(-2.3e6 / (350.0 * 9.80665)).epsilon(1e-12));
    CHECK(mdot == doctest::Approx(-670.1).epsilon(1e-3));
}

TEST_CASE("angle of attack convention") {
    CHECK(aoa_deg(0.0, -1.0, 180.0) == doctest::Approx(90.0));
    CHECK(aoa_deg(1.0, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(aoa_deg(0.0, 1.0, 0.0) == doctest::Approx(90.0));
    CHECK(aoa_deg(-1.0, 0.0, 0.0) == doctest::Approx(180.0));
    // Belly-flop start of both presets is close to broadside.
    const NondimScenario s = nondimensionalize(preset_case1());
    CHECK(angle_of_attack(initial_state(s)) * kRadToDeg == doctest::Approx(90.0).epsilon(1e-2));
    // At rest there is no flow angle.
    CHECK(aoa_deg(0.0, 0.0, 37.0) == 0.0);
}

TEST_CASE("wrap_two_pi range") {
    for (double a : {-20.0, -kPi, -1e-300, 0.0, 1.0, 2 * kPi, 7.0, 1e6}) {
        const double w = wrap_two_pi(a);
        CHECK(w >= 0.0);
        CHECK(w < 2.0 * kPi);
    }
}

TEST_CASE("rhs equations") {
    const NondimScenario s = nondimensionalize(preset_case1());
    VehicleState x = initial_state(s);
    x.delta_d() = 0.05;
    const AeroForces a{0.01, 0.02, 0.003};
    const ControlInput u{s.min_thrust, 0.1};
    const VehicleState d = rhs(x, u, a, s);
    CHECK(d.x() == x.u());
    CHECK(d.theta() == x.omega());
    const double dir = x.theta() + x.delta_d();
    CHECK(d.u() == doctest::Approx((u.thrust * std::cos(dir) + a.fx) / x.m()));
    CHECK(d.v() == doctest::Approx((u.thrust * std::sin(dir) + a.fy) / x.m() - s.gravity));
    CHECK(d.omega() ==
          doctest::Approx((-u.thrust * std::sin(x.delta_d()) * s.engine_arm + a.moment) / s.inertia));
    CHECK(d.delta_d() == doctest::Approx((0.1 - 0.05) / s.actuator_lag));
}

TEST_CASE("projectile oracle") { CHECK(oracle::projectile_error() < 1e-12); }

TEST_CASE("actuator lag oracle") {
    CHECK(oracle::lag_error(10) < 1e-6);
    CHECK(oracle::lag_error(20) < oracle::lag_error(10));
}

TEST_CASE("RK4 global order") {
    const double r = oracle::rk4_halving_ratio();
    CHECK(r >= 14.0);
    CHECK(r <= 18.0);
}

TEST_CASE("simulate rejects non-finite state with the step index") {
    NondimScenario s = nondimensionalize(preset_case1());
    s.wet_mass = 0.0;  // division by zero mass
    ControlSequence u;
    u.thrust.assign(5, s.max_thrust);
    u.gimbal.assign(5, 0.0);
    try {
        simulate(u, s, NoAero{});
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.index() == 0);
    }
}
