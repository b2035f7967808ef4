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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flipopt/io.hpp"
#include "flipopt/optimizer.hpp"

using namespace flipopt;

TEST_CASE("cosine schedule endpoints and monotonicity") {
    OptimizerConfig c;
    c.lr_max = 3e-2;
    c.lr_min = 1e-5;
    c.n_steps = 5000;
    CHECK(cosine_lr(0, c) == c.lr_max);
    CHECK(cosine_lr(c.n_steps, c) == doctest::Approx(c.lr_min).epsilon(1e-12));
    CHECK(cosine_lr(c.n_steps / 2, c) == doctest::Approx(0.5 * (c.lr_max + c.lr_min)));
    for (int i = 1; i <= c.n_steps; ++i) REQUIRE(cosine_lr(i, c) <= cosine_lr(i - 1, c));
    // Out-of-range steps are clamped
    CHECK(cosine_lr(-4, c) == c.lr_max);
    CHECK(cosine_lr(c.n_steps + 10, c) == cosine_lr(c.n_steps, c));
}

TEST_CASE("Adam step size is bounded by the learning rate") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> scale(-8.0, 8.0);
    const AdamHyper h;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> p(16, 0.0), g(16);
        AdamState st(16);
        for (int step = 0; step < 50; ++step) {
            for (double& x : g) x = n(rng) * std::pow(10.0, scale(rng));
            const std::vector<double> before = p;
            const double lr = 1e-3;
            adam_step(p, g, st, lr, h);
            for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(std::abs(p[i] - before[i]) <= 1.1 * lr);
        }
    }
}

TEST_CASE("first Adam step moves by lr against the gradient sign") {
    std::vector<double> p = {0.0, 0.0, 0.0};
    const std::vector<double> g = {3.0, -1e-3, 250.0};
    AdamState st(3);
    adam_step(p, g, st, 0.01, AdamHyper{});
    CHECK(p[0] == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(0.01).epsilon(1e-4));
    CHECK(p[2] == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(st.t == 1);
}

TEST_CASE("Adam rejects non-finite updates and leaves parameters alone") {
    std::vector<double> p = {1.0, 2.0};
    const std::vector<double> g = {1.0, std::numeric_limits<double>::quiet_NaN()};
    AdamState st(2);
    CHECK_THROWS_AS(adam_step(p, g, st, 0.1, AdamHyper{}), NumericalError);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 2.0);
    CHECK(st.t == 0);
}

TEST_CASE("optimize returns the best iterate") {
    ScenarioConfig c = preset_case1();
    c.opt.n_steps = 60;
    const NondimScenario s = nondimensionalize(c);
    const AeroModel aero = make_aero(c);
    const OptimizationResult r = optimize(s, aero, c.opt);
    REQUIRE(r.history.size() == 60);
    double best = r.history[0].loss.total;
    int best_step = 0;
    for (const LossRecord& rec : r.history)
        if (rec.loss.total < best) best = rec.loss.total, best_step = rec.step;
    CHECK(r.best_step == best_step);
    CHECK(r.final_loss.total == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.final_loss.total < r.history.front().loss.total);
    CHECK(r.trajectory.steps() == 90);
}

TEST_CASE("bptt and adjoint optimizations coincide") {
    ScenarioConfig c = preset_case2();
    c.opt.n_steps = 40;
    const NondimScenario s = nondimensionalize(c);
    const AeroModel aero = make_aero(c);
    OptimizerConfig a = c.opt, b = c.opt;
    a.engine = GradientEngine::bptt;
    b.engine = GradientEngine::adjoint;
    const OptimizationResult ra = optimize(s, aero, a), rb = optimize(s, aero, b);
    CHECK(ra.best_step == rb.best_step);
    CHECK(ra.final_loss.total == doctest::Approx(rb.final_loss.total).epsilon(1e-10));
}

TEST_CASE("non-finite loss aborts with a snapshot") {
    ScenarioConfig c = preset_case1();
    c.opt.n_steps = 5;
    c.loss_weights.position = std::numeric_limits<double>::infinity();
    const NondimScenario s = nondimensionalize(c);
    try {
        optimize(s, make_aero(c), c.opt);
        FAIL("expected OptimizationAborted");
    } catch (const OptimizationAborted& e) {
        CHECK(e.index() == 0);
        CHECK(e.snapshot() == initial_raw_controls(s));
    }
}

TEST_CASE("finite-difference engine is not an optimizer option") {
    ScenarioConfig c = preset_case1();
    c.opt.engine = GradientEngine::finite_diff;
    CHECK_THROWS_AS(optimize(nondimensionalize(c), make_aero(c), c.opt), ConfigError);
}

TEST_CASE("gradient clipping keeps progress finite") {
    ScenarioConfig c = preset_case1();
    c.opt.n_steps = 20;
    c.opt.clip_grad_inf = 1.0;
    const OptimizationResult r = optimize(nondimensionalize(c), make_aero(c), c.opt);
    CHECK(std::isfinite(r.final_loss.total));
}
