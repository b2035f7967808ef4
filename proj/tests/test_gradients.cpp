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

#include "flipopt/gradients.hpp"
#include "flipopt/io.hpp"

using namespace flipopt;

namespace {

struct Setup {
    NondimScenario scn;
    AeroModel aero;
};

Setup make(const char* preset, int K) {
    ScenarioConfig c = load_scenario(preset);
    set_step_count(c, K);
    return {nondimensionalize(c), make_aero(c)};
}

}  // namespace

TEST_CASE("bptt and adjoint agree to rounding") {
    for (const char* preset : {"case1", "case2"}) {
        const Setup s = make(preset, 24);
        const RawControls raw = random_raw_controls(24, 5);
        const GradientReport b = grad_bptt(raw, s.scn, s.aero);
        const GradientReport a = grad_adjoint(raw, s.scn, s.aero);
        CHECK(relative_mae(a.thrust, b.thrust) < 1e-12);
        CHECK(relative_mae(a.gimbal, b.gimbal) < 1e-12);
        CHECK(a.loss.total == b.loss.total);
    }
}

TEST_CASE("bptt matches finite differences") {
    for (const char* preset : {"case1", "case2"}) {
        const Setup s = make(preset, 6);
        const RawControls raw = random_raw_controls(6, 8);
        const GradientComparison c =
            compare_gradients(grad_bptt(raw, s.scn, s.aero), finite_diff_grad(raw, s.scn, s.aero));
        CHECK(c.passed);
        CHECK(c.max_rel_error < 1e-5);
    }
}

TEST_CASE("adjoint with a single checkpoint slot") {
    const Setup s = make("case2", 30);
    const RawControls raw = random_raw_controls(30, 2);
    const GradientReport b = grad_bptt(raw, s.scn, s.aero);
    for (int slots : {1, 2, 3, 30, 64}) {
        const GradientReport a = grad_adjoint(raw, s.scn, s.aero, {slots});
        CHECK(relative_mae(a.thrust, b.thrust) < 1e-12);
    }
}

TEST_CASE("wide loss agrees with the double loss") {
    const Setup s = make("case2", 40);
    const RawControls raw = random_raw_controls(40, 3);
    const double d = evaluate_loss(raw, s.scn, s.aero);
    const long double w = evaluate_loss_wide(raw, s.scn, s.aero);
    CHECK(static_cast<double>(w) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("auxiliary memory: bptt linear in K, adjoint flat") {
    const Setup s90 = make("case2", 90);
    const Setup s180 = make("case2", 180);
    const RawControls r90 = random_raw_controls(90, 1), r180 = random_raw_controls(180, 1);
    const auto b90 = grad_bptt(r90, s90.scn, s90.aero).peak_aux_bytes;
    const auto b180 = grad_bptt(r180, s180.scn, s180.aero).peak_aux_bytes;
    const auto a90 = grad_adjoint(r90, s90.scn, s90.aero).peak_aux_bytes;
    const auto a180 = grad_adjoint(r180, s180.scn, s180.aero).peak_aux_bytes;
    CHECK(static_cast<double>(b180) / b90 > 1.8);
    CHECK(static_cast<double>(a180) / a90 <= 1.25);
    CHECK(a90 < b90);
}

TEST_CASE("finite difference work count") {
    const Setup s = make("case1", 5);
    const GradientReport fd = finite_diff_grad(random_raw_controls(5, 0), s.scn, s.aero);
    CHECK(fd.forward_work == 4 * 5);
    CHECK_THROWS_AS(finite_diff_grad(random_raw_controls(5, 0), s.scn, s.aero, 0.0), ConfigError);
}

TEST_CASE("compare_gradients flags the worst entry") {
    GradientReport ref, g;
    ref.thrust = {1.0, 2.0, 1e-10};
    ref.gimbal = {-3.0, 0.5, 0.0};
    g = ref;
    CHECK(compare_gradients(g, ref).passed);
    g.gimbal[1] *= 1.0 + 1e-4;
    const GradientComparison c = compare_gradients(g, ref);
    CHECK_FALSE(c.passed);
    CHECK(c.worst_index == 4);
    CHECK(c.worst_reference == 0.5);
    g = ref;
    g.thrust[2] = 5e-8;  // below the floor: absolute test
    const GradientComparison d = compare_gradients(g, ref);
    CHECK_FALSE(d.passed);
    CHECK(d.worst_index == 2);
}

TEST_CASE("relative_mae") {
    CHECK(relative_mae({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(relative_mae({1, 2, 3}, {1, 2, 4}) == doctest::Approx(1.0 / 7.0));
    CHECK(relative_mae({}, {}) == 0.0);
    CHECK(relative_mae({0.0}, {0.0}) == 0.0);
    CHECK_THROWS_AS(relative_mae({1}, {1, 2}), ConfigError);
}

TEST_CASE("engine names") {
    CHECK(std::string(engine_name(GradientEngine::bptt)) == "bptt");
    CHECK(std::string(engine_name(GradientEngine::adjoint)) == "adjoint");
}
