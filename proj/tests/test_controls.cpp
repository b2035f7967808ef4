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
#include <limits>
#include <random>

#include "flipopt/controls.hpp"
#include "flipopt/error.hpp"
#include "flipopt/io.hpp"

using namespace flipopt;

TEST_CASE("bounds hold for random raw parameters") {
    const NondimScenario s = nondimensionalize(preset_case1());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> wide(-60.0, 60.0);
    for (int trial = 0; trial < 2000; ++trial) {
        RawControls raw(8);
        for (int k = 0; k < 8; ++k) {
            raw.thrust[k] = wide(rng);
            raw.gimbal[k] = wide(rng);
        }
        const ControlSequence c = reparameterize(raw, s);
        for (int k = 0; k < 8; ++k) {
            REQUIRE(c.thrust[k] >= s.min_thrust);
            REQUIRE(c.thrust[k] <= s.max_thrust);
            REQUIRE(std::abs(c.gimbal[k]) <= s.max_gimbal);
        }
    }
}

TEST_CASE("extreme raw values saturate at the bounds") {
    const NondimScenario s = nondimensionalize(preset_case1());
    RawControls raw(2);
    raw.thrust = {1e300, -1e300};
    raw.gimbal = {1e300, -1e300};
    const ControlSequence c = reparameterize(raw, s);
    CHECK(c.thrust[0] == s.max_thrust);
    CHECK(c.thrust[1] == s.min_thrust);
    CHECK(c.gimbal[0] == s.max_gimbal);
    CHECK(c.gimbal[1] == -s.max_gimbal);
}

TEST_CASE("non-finite raw value is reported with its index") {
    const NondimScenario s = nondimensionalize(preset_case1());
    RawControls raw(4);
    raw.gimbal[2] = std::numeric_limits<double>::quiet_NaN();
    try {
        reparameterize(raw, s);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.index() == 2);
        CHECK(e.where() == "u_delta");
    }
}

TEST_CASE("slopes match finite differences") {
    const NondimScenario s = nondimensionalize(preset_case1());
    const RawControls raw = random_raw_controls(6, 1, 3.0);
    const ControlSequence d = reparameterize_slopes(raw, s);
    const double h = 1e-6;
    for (int k = 0; k < 6; ++k) {
        RawControls up = raw, dn = raw;
        up.thrust[k] += h;
        dn.thrust[k] -= h;
        up.gimbal[k] += h;
        dn.gimbal[k] -= h;
        const ControlSequence a = reparameterize(up, s), b = reparameterize(dn, s);
        CHECK(d.thrust[k] == doctest::Approx((a.thrust[k] - b.thrust[k]) / (2 * h)).epsilon(1e-7));
        CHECK(d.gimbal[k] == doctest::Approx((a.gimbal[k] - b.gimbal[k]) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("unsquash inverts reparameterize") {
    const NondimScenario s = nondimensionalize(preset_case1());
    const RawControls raw = random_raw_controls(10, 2, 4.0);
    const RawControls back = unsquash(reparameterize(raw, s), s);
    for (int k = 0; k < 10; ++k) {
        CHECK(back.thrust[k] == doctest::Approx(raw.thrust[k]).epsilon(1e-9));
        CHECK(back.gimbal[k] == doctest::Approx(raw.gimbal[k]).epsilon(1e-9));
    }
}

TEST_CASE("initial controls hover at the wet weight") {
    const NondimScenario s = nondimensionalize(preset_case1());
    const ControlSequence c = reparameterize(initial_raw_controls(s), s);
    CHECK(c.thrust[0] == doctest::Approx(s.wet_mass * s.gravity).epsilon(1e-12));
    CHECK(c.gimbal[0] == 0.0);
    CHECK(c.steps() == s.steps);
}

TEST_CASE("smoothness gradient matches finite differences") {
    const NondimScenario s = nondimensionalize(preset_case1());
    const ControlSequence c = reparameterize(random_raw_controls(7, 3), s);
    std::vector<double> gt(7, 0.0), gg(7, 0.0);
    smoothness_gradient(c, s, 1.0, gt, gg);
    const double h = 1e-7;
    for (int k = 0; k < 7; ++k) {
        ControlSequence up = c, dn = c;
        up.thrust[k] += h;
        dn.thrust[k] -= h;
        CHECK(gt[k] == doctest::Approx((smoothness_penalty(up, s) - smoothness_penalty(dn, s)) / (2 * h))
                           .epsilon(1e-6));
        up = c;
        dn = c;
        up.gimbal[k] += h;
        dn.gimbal[k] -= h;
        CHECK(gg[k] == doctest::Approx((smoothness_penalty(up, s) - smoothness_penalty(dn, s)) / (2 * h))
                           .epsilon(1e-6));
    }
}

TEST_CASE("random raw controls are reproducible") {
    CHECK(random_raw_controls(5, 9) == random_raw_controls(5, 9));
    CHECK(!(random_raw_controls(5, 9) == random_raw_controls(5, 10)));
    for (double x : random_raw_controls(100, 1, 2.0).thrust) {
        CHECK(x >= -2.0);
        CHECK(x < 2.0);
    }
}

TEST_CASE("check_bounds") {
    const NondimScenario s = nondimensionalize(preset_case1());
    ControlSequence c;
    c.thrust = {s.min_thrust, s.max_thrust};
    c.gimbal = {-s.max_gimbal, s.max_gimbal};
    CHECK_NOTHROW(check_bounds(c, s));
    c.thrust[0] = 0.9 * s.min_thrust;
    CHECK_THROWS_AS(check_bounds(c, s), ConfigError);
    c.thrust[0] = s.min_thrust;
    c.gimbal[1] = 1.01 * s.max_gimbal;
    CHECK_THROWS_AS(check_bounds(c, s), ConfigError);
}

TEST_CASE("saturation count") {
    RawControls raw(3);
    raw.thrust = {7.0, 0.0, -6.5};
    raw.gimbal = {0.0, 6.0, 0.0};
    CHECK(count_saturated(raw) == 2);
}
