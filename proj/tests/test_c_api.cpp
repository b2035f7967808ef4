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
#include <cstring>
#include <string>
#include <vector>

#include "flipopt/flipopt.h"
#include "support.hpp"

namespace {

struct Scn {
    flipopt_scenario* p = nullptr;
    explicit Scn(const char* name) { REQUIRE(flipopt_scenario_load(name, &p) == FLIPOPT_OK); }
    ~Scn() { flipopt_scenario_free(p); }
};

int g_calls = 0;
void count_progress(int, double, double loss, void* user) {
    ++g_calls;
    *static_cast<double*>(user) = loss;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(flipopt_version()) == "0.3.0");
    CHECK(std::string(flipopt_status_name(FLIPOPT_OK)) == "ok");
    CHECK(std::string(flipopt_status_name(FLIPOPT_CONFIG)) == "config");
}

TEST_CASE("scenario loading and errors") {
    flipopt_scenario* s = nullptr;
    CHECK(flipopt_scenario_load("case3", &s) == FLIPOPT_CONFIG);
    CHECK(s == nullptr);
    CHECK(std::string(flipopt_last_error()).find("case1") != std::string::npos);
    CHECK(flipopt_scenario_load(nullptr, &s) == FLIPOPT_INVALID_ARG);
    CHECK(flipopt_scenario_load("case1", nullptr) == FLIPOPT_INVALID_ARG);
    CHECK(flipopt_scenario_load("/nonexistent/s.json", &s) != FLIPOPT_OK);
    CHECK(flipopt_scenario_from_json("{\"K\": -1}", nullptr, &s) == FLIPOPT_CONFIG);
}

TEST_CASE("scenario JSON round trip and setters") {
    Scn a("case2");
    CHECK(flipopt_scenario_steps(a.p) == 90);
    CHECK(flipopt_scenario_set_steps(a.p, 0) == FLIPOPT_CONFIG);
    CHECK(flipopt_scenario_steps(a.p) == 90);
    CHECK(flipopt_scenario_set_steps(a.p, 30) == FLIPOPT_OK);
    CHECK(flipopt_scenario_set_seed(a.p, 77) == FLIPOPT_OK);
    CHECK(flipopt_scenario_set_iterations(a.p, 0) == FLIPOPT_CONFIG);
    char* json = nullptr;
    REQUIRE(flipopt_scenario_to_json(a.p, &json) == FLIPOPT_OK);
    flipopt_scenario* b = nullptr;
    REQUIRE(flipopt_scenario_from_json(json, nullptr, &b) == FLIPOPT_OK);
    CHECK(flipopt_scenario_steps(b) == 30);
    CHECK(flipopt_scenario_seed(b) == 77);
    char* json2 = nullptr;
    REQUIRE(flipopt_scenario_to_json(b, &json2) == FLIPOPT_OK);
    CHECK(std::strcmp(json, json2) == 0);
    flipopt_string_free(json);
    flipopt_string_free(json2);
    flipopt_scenario_free(b);
}

TEST_CASE("short optimisation through the C API") {
    Scn s("case1");
    REQUIRE(flipopt_scenario_set_iterations(s.p, 25) == FLIPOPT_OK);
    REQUIRE(flipopt_scenario_set_engine(s.p, FLIPOPT_ENGINE_ADJOINT) == FLIPOPT_OK);
    double last = 0.0;
    g_calls = 0;
    flipopt_run* run = nullptr;
    REQUIRE(flipopt_optimize(s.p, nullptr, 0, nullptr, count_progress, &last, &run) == FLIPOPT_OK);
    CHECK(g_calls == 25);
    CHECK(std::isfinite(last));
    CHECK(std::string(flipopt_run_engine(run)) == "adjoint");

    flipopt_run_summary sum{};
    REQUIRE(flipopt_run_summary_get(run, &sum) == FLIPOPT_OK);
    CHECK(sum.iterations == 25);
    CHECK(sum.steps == 90);
    CHECK(sum.residuals_finite == 1);
    CHECK(sum.best_step >= 0);
    CHECK(sum.best_step < 25);

    double x[8];
    REQUIRE(flipopt_run_state(run, 0, x) == FLIPOPT_OK);
    CHECK(x[0] == 0.0);
    CHECK(x[2] == doctest::Approx(170.0));
    CHECK(x[6] == doctest::Approx(135000.0));
    REQUIRE(flipopt_run_state(run, 90, x) == FLIPOPT_OK);
    CHECK(x[6] == doctest::Approx(sum.residuals.min_mass_kg));
    CHECK(flipopt_run_state(run, 91, x) == FLIPOPT_INVALID_ARG);
    double u[2];
    REQUIRE(flipopt_run_control(run, 0, u) == FLIPOPT_OK);
    CHECK(u[0] >= 0.25 * 2300e3 * (1 - 1e-12));
    CHECK(u[0] <= 2300e3 * (1 + 1e-12));
    CHECK(std::abs(u[1]) <= 10.0);
    CHECK(flipopt_run_control(run, 90, u) == FLIPOPT_INVALID_ARG);
    flipopt_run_free(run);
}

TEST_CASE("simulate from a controls file") {
    const auto dir = test::scratch("capi_sim");
    Scn s("case1");
    REQUIRE(flipopt_scenario_set_iterations(s.p, 5) == FLIPOPT_OK);
    const std::string opt = (dir / "opt").string();
    REQUIRE(flipopt_optimize(s.p, opt.c_str(), 0, nullptr, nullptr, nullptr, nullptr) == FLIPOPT_OK);
    flipopt_run* run = nullptr;
    const std::string controls = (dir / "opt" / "controls.csv").string();
    const std::string sim = (dir / "sim").string();
    REQUIRE(flipopt_simulate(s.p, controls.c_str(), 0, sim.c_str(), 0, nullptr, &run) == FLIPOPT_OK);
    CHECK(test::slurp(dir / "opt" / "trajectory.csv") == test::slurp(dir / "sim" / "trajectory.csv"));
    flipopt_run_summary sum{};
    REQUIRE(flipopt_run_summary_get(run, &sum) == FLIPOPT_OK);
    CHECK(sum.best_step == -1);
    flipopt_run_free(run);

    CHECK(flipopt_simulate(s.p, "/nonexistent.csv", 0, nullptr, 0, nullptr, nullptr) == FLIPOPT_IO);
    REQUIRE(flipopt_scenario_set_steps(s.p, 89) == FLIPOPT_OK);
    CHECK(flipopt_simulate(s.p, controls.c_str(), 0, nullptr, 0, nullptr, nullptr) == FLIPOPT_CONFIG);
}

TEST_CASE("gradient check status codes") {
    Scn s("case2");
    REQUIRE(flipopt_scenario_set_steps(s.p, 6) == FLIPOPT_OK);
    flipopt_grad_check r{};
    CHECK(flipopt_check_grad(s.p, FLIPOPT_ENGINE_BPTT, 1, -1, nullptr, 0, nullptr, &r) == FLIPOPT_OK);
    CHECK(r.max_rel_error < 1e-5);
    CHECK(flipopt_check_grad(s.p, FLIPOPT_ENGINE_ADJOINT, 1, -1, nullptr, 0, nullptr, &r) == FLIPOPT_OK);
    CHECK(flipopt_check_grad(s.p, FLIPOPT_ENGINE_BPTT, 1, 3, nullptr, 0, nullptr, &r) ==
          FLIPOPT_TOLERANCE);
    CHECK(r.worst_index == 3);
    CHECK(flipopt_check_grad(s.p, FLIPOPT_ENGINE_BPTT, 1, 12, nullptr, 0, nullptr, &r) ==
          FLIPOPT_CONFIG);
}

TEST_CASE("engine comparison") {
    Scn s("case2");
    REQUIRE(flipopt_scenario_set_steps(s.p, 20) == FLIPOPT_OK);
    REQUIRE(flipopt_scenario_set_iterations(s.p, 10) == FLIPOPT_OK);
    flipopt_engine_comparison c{};
    REQUIRE(flipopt_compare_engines(s.p, FLIPOPT_ENGINE_BPTT, FLIPOPT_ENGINE_ADJOINT, nullptr, 0,
                                    nullptr, nullptr, nullptr, &c) == FLIPOPT_OK);
    CHECK(c.gradient_mae < c.tolerance);
    CHECK(c.controls_mae < c.tolerance);
    CHECK(c.trajectory_mae < c.tolerance);
    CHECK(c.peak_aux_bytes_b < c.peak_aux_bytes_a);
}

TEST_CASE("surrogate training rejects too few samples") {
    const auto dir = test::scratch("capi_train");
    const std::string out = (dir / "w.json").string();
    flipopt_fit_report r{};
    CHECK(flipopt_train_aero(3, 0, out.c_str(), 0, nullptr, &r) == FLIPOPT_CONFIG);
    CHECK(flipopt_train_aero(36, 0, nullptr, 0, nullptr, &r) == FLIPOPT_INVALID_ARG);
    CHECK_FALSE(test::fs::exists(dir / "w.json"));
}

TEST_CASE("file hashing") {
    const auto dir = test::scratch("capi_hash");
    test::spit(dir / "a.txt", "a");
    uint64_t h = 0;
    REQUIRE(flipopt_hash_file((dir / "a.txt").c_str(), &h) == FLIPOPT_OK);
    CHECK(h == 0xaf63dc4c8601ec8cULL);
    CHECK(flipopt_hash_file((dir / "missing").c_str(), &h) == FLIPOPT_IO);
}

TEST_CASE("plot of a missing run directory") {
    flipopt_plot_report r{};
    CHECK(flipopt_plot("/nonexistent/run", &r) == FLIPOPT_CONFIG);
}
