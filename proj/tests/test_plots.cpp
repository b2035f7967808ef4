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
#include <filesystem>

#include "flipopt/error.hpp"
#include "flipopt/io.hpp"
#include "flipopt/plots.hpp"
#include "support.hpp"

using namespace flipopt;

namespace {

test::fs::path write_run(const std::string& name, int K) {
    const auto dir = test::scratch(name);
    ScenarioConfig c = preset_case1();
    set_step_count(c, K);
    const NondimScenario s = nondimensionalize(c);
    const Trajectory t = rollout(random_raw_controls(K, 2), s, make_aero(c));
    test::spit(dir / "trajectory.csv", trajectory_csv(t, c));
    test::spit(dir / "scenario.json", scenario_to_json(c));
    return dir;
}

}  // namespace

TEST_CASE("plots write three SVG files") {
    const auto dir = write_run("plots_ok", 30);
    const PlotReport r = emit_plots(dir.string());
    REQUIRE(r.files.size() == 3);
    for (const char* f : {"time_histories.svg", "pose.svg", "flight_parameters.svg"}) {
        const std::string svg = test::slurp(dir / f);
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(svg.find("</svg>") != std::string::npos);
        CHECK(svg.find("nan") == std::string::npos);
    }
    CHECK(std::isfinite(r.flip_y_over_L));
    CHECK(r.flip_time_s >= 0.0);
    CHECK(r.peak_reduced_frequency >= 0.0);
}

TEST_CASE("flip report matches the trajectory peak") {
    const auto dir = write_run("plots_flip", 30);
    const CsvTable t = parse_csv(test::slurp(dir / "trajectory.csv"));
    const auto& om = *t.column("omega_radps");
    int peak = 0;
    for (int k = 1; k < t.rows(); ++k)
        if (std::abs(om[k]) > std::abs(om[peak])) peak = k;
    const PlotReport r = emit_plots(dir.string());
    CHECK(r.flip_time_s == doctest::Approx((*t.column("t_s"))[peak]));
    CHECK(r.flip_y_over_L == doctest::Approx((*t.column("y_m"))[peak] / 50.0));
}

TEST_CASE("malformed trajectories are rejected") {
    const auto empty = test::scratch("plots_empty");
    test::spit(empty / "trajectory.csv", "k,t_s,x_m\n");
    CHECK_THROWS_AS(emit_plots(empty.string()), ConfigError);

    const auto missing = write_run("plots_missing", 5);
    std::string text = test::slurp(missing / "trajectory.csv");
    text.replace(text.find("omega_radps"), 11, "omega_other");
    test::spit(missing / "trajectory.csv", text);
    try {
        emit_plots(missing.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("omega_radps") != std::string::npos);
    }

    CHECK_THROWS_AS(emit_plots(test::scratch("plots_none").string()), ConfigError);
}
