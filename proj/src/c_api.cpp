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

#include "flipopt/flipopt.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "flipopt/commands.hpp"
#include "flipopt/error.hpp"

struct flipopt_scenario {
    flipopt::ScenarioConfig config;
};

struct flipopt_run {
    flipopt::ScenarioConfig config;
    flipopt::RunResult result;
};

namespace {

thread_local std::string g_last_error;

flipopt_status fail(flipopt_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

/// Maps library exceptions onto status codes.
template <class F>
flipopt_status guard(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const flipopt::ConfigError& e) {
        return fail(FLIPOPT_CONFIG, e.what());
    } catch (const flipopt::NumericalError& e) {
        return fail(FLIPOPT_NUMERIC, e.what());
    } catch (const flipopt::IoError& e) {
        return fail(FLIPOPT_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FLIPOPT_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FLIPOPT_INTERNAL, e.what());
    } catch (...) {
        return fail(FLIPOPT_INTERNAL, "unknown error");
    }
}

std::vector<std::string> args(int argc, const char* const* argv) {
    std::vector<std::string> out;
    for (int i = 0; i < argc && argv; ++i) out.emplace_back(argv[i] ? argv[i] : "");
    return out;
}

std::string str(const char* s) { return s ? s : ""; }

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

flipopt::GradientEngine to_engine(flipopt_engine e) {
    switch (e) {
        case FLIPOPT_ENGINE_BPTT: return flipopt::GradientEngine::bptt;
        case FLIPOPT_ENGINE_ADJOINT: return flipopt::GradientEngine::adjoint;
    }
    throw flipopt::ConfigError("engine", "unknown engine value");
}

flipopt::ProgressCallback progress_adapter(flipopt_progress_fn fn, void* user) {
    if (!fn) return {};
    return [fn, user](const flipopt::LossRecord& r) { fn(r.step, r.lr, r.loss.total, user); };
}

#define FLIPOPT_REQUIRE(p) \
    if (!(p)) return fail(FLIPOPT_INVALID_ARG, #p " must not be null")

flipopt_status finish_run(flipopt::ScenarioConfig config, flipopt::RunResult result,
                          flipopt_run** out_run) {
    if (out_run) *out_run = new flipopt_run{std::move(config), std::move(result)};
    return FLIPOPT_OK;
}

}  // namespace

extern "C" {

const char* flipopt_version(void) { return flipopt::kVersion; }

const char* flipopt_last_error(void) { return g_last_error.c_str(); }

const char* flipopt_status_name(flipopt_status status) {
    switch (status) {
        case FLIPOPT_OK: return "ok";
        case FLIPOPT_TOLERANCE: return "tolerance";
        case FLIPOPT_CONFIG: return "config";
        case FLIPOPT_NUMERIC: return "numeric";
        case FLIPOPT_IO: return "io";
        case FLIPOPT_INVALID_ARG: return "invalid_argument";
        case FLIPOPT_INTERNAL: return "internal";
    }
    return "unknown";
}

void flipopt_string_free(char* s) { std::free(s); }

flipopt_status flipopt_scenario_load(const char* path_or_preset, flipopt_scenario** out) {
    FLIPOPT_REQUIRE(path_or_preset);
    FLIPOPT_REQUIRE(out);
    return guard([&] {
        *out = new flipopt_scenario{flipopt::load_scenario(path_or_preset)};
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_scenario_from_json(const char* json, const char* base_dir,
                                          flipopt_scenario** out) {
    FLIPOPT_REQUIRE(json);
    FLIPOPT_REQUIRE(out);
    return guard([&] {
        *out = new flipopt_scenario{flipopt::scenario_from_json(json, "<json>", str(base_dir))};
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_scenario_to_json(const flipopt_scenario* scn, char** out_json) {
    FLIPOPT_REQUIRE(scn);
    FLIPOPT_REQUIRE(out_json);
    return guard([&] {
        *out_json = dup(flipopt::scenario_to_json(scn->config));
        return FLIPOPT_OK;
    });
}

void flipopt_scenario_free(flipopt_scenario* scn) { delete scn; }

flipopt_status flipopt_scenario_set_steps(flipopt_scenario* scn, int steps) {
    FLIPOPT_REQUIRE(scn);
    return guard([&] {
        flipopt::set_step_count(scn->config, steps);
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_scenario_set_engine(flipopt_scenario* scn, flipopt_engine engine) {
    FLIPOPT_REQUIRE(scn);
    return guard([&] {
        scn->config.opt.engine = to_engine(engine);
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_scenario_set_seed(flipopt_scenario* scn, uint64_t seed) {
    FLIPOPT_REQUIRE(scn);
    scn->config.seed = seed;
    return FLIPOPT_OK;
}

flipopt_status flipopt_scenario_set_iterations(flipopt_scenario* scn, int n_steps) {
    FLIPOPT_REQUIRE(scn);
    if (n_steps < 1) return fail(FLIPOPT_CONFIG, "opt.n_steps: must be >= 1");
    scn->config.opt.n_steps = n_steps;
    return FLIPOPT_OK;
}

int flipopt_scenario_steps(const flipopt_scenario* scn) { return scn ? scn->config.steps : -1; }

uint64_t flipopt_scenario_seed(const flipopt_scenario* scn) { return scn ? scn->config.seed : 0; }

flipopt_status flipopt_optimize(const flipopt_scenario* scn, const char* out_dir, int argc,
                                const char* const* argv, flipopt_progress_fn progress, void* user,
                                flipopt_run** out_run) {
    FLIPOPT_REQUIRE(scn);
    return guard([&] {
        flipopt::RunResult r = flipopt::run_optimize(scn->config, str(out_dir), args(argc, argv),
                                                     progress_adapter(progress, user));
        return finish_run(scn->config, std::move(r), out_run);
    });
}

flipopt_status flipopt_simulate(const flipopt_scenario* scn, const char* controls_csv, int no_aero,
                                const char* out_dir, int argc, const char* const* argv,
                                flipopt_run** out_run) {
    FLIPOPT_REQUIRE(scn);
    FLIPOPT_REQUIRE(controls_csv);
    return guard([&] {
        flipopt::ScenarioConfig config = scn->config;
        if (no_aero) config.aero.kind = flipopt::AeroKind::none;
        flipopt::RunResult r = flipopt::run_simulate(config, controls_csv, no_aero != 0,
                                                     str(out_dir), args(argc, argv));
        return finish_run(config, std::move(r), out_run);
    });
}

flipopt_status flipopt_run_summary_get(const flipopt_run* run, flipopt_run_summary* out) {
    FLIPOPT_REQUIRE(run);
    FLIPOPT_REQUIRE(out);
    const auto& r = run->result;
    const auto& t = r.residuals;
    out->residuals = {t.position_error_m, t.velocity_error_mps, t.speed_error_mps,
                      t.pitch_error_deg,  t.omega_radps,        t.min_mass_kg,
                      t.flip_y_over_L,    t.flip_time_s};
    out->residuals_finite = r.residuals_finite ? 1 : 0;
    out->loss = r.loss.total;
    out->best_step = r.best_step;
    out->iterations = r.iterations;
    out->saturated_params = r.saturated_params;
    out->wall_seconds = r.wall_seconds;
    out->steps = r.trajectory.steps();
    return FLIPOPT_OK;
}

const char* flipopt_run_engine(const flipopt_run* run) {
    return run ? run->result.engine.c_str() : "";
}

flipopt_status flipopt_run_state(const flipopt_run* run, int k, double out[8]) {
    FLIPOPT_REQUIRE(run);
    FLIPOPT_REQUIRE(out);
    const auto& states = run->result.trajectory.states;
    if (k < 0 || k >= static_cast<int>(states.size()))
        return fail(FLIPOPT_INVALID_ARG, "state index out of range");
    const flipopt::SiState s = flipopt::redimensionalize(states[k], run->config.refs);
    const double row[8] = {s.x_m,         s.y_m,    s.theta_rad * flipopt::kRadToDeg,
                           s.u_mps,       s.v_mps,  s.omega_radps,
                           s.mass_kg,     s.delta_d_rad * flipopt::kRadToDeg};
    std::memcpy(out, row, sizeof row);
    return FLIPOPT_OK;
}

flipopt_status flipopt_run_control(const flipopt_run* run, int k, double out[2]) {
    FLIPOPT_REQUIRE(run);
    FLIPOPT_REQUIRE(out);
    const auto& c = run->result.trajectory.controls;
    if (k < 0 || k >= c.steps()) return fail(FLIPOPT_INVALID_ARG, "control index out of range");
    out[0] = c.thrust[k] * run->config.refs.force_N();
    out[1] = c.gimbal[k] * flipopt::kRadToDeg;
    return FLIPOPT_OK;
}

void flipopt_run_free(flipopt_run* run) { delete run; }

flipopt_status flipopt_train_aero(int samples, uint64_t seed, const char* weights_out, int argc,
                                  const char* const* argv, flipopt_fit_report* out) {
    FLIPOPT_REQUIRE(weights_out);
    return guard([&] {
        const flipopt::FitReport r =
            flipopt::run_train_aero(samples, seed, weights_out, args(argc, argv));
        if (out) {
            out->samples = r.samples;
            out->epochs = r.epochs;
            out->mse = r.mse;
            for (int i = 0; i < 3; ++i) out->max_abs_error[i] = r.max_abs_error[i];
        }
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_check_grad(const flipopt_scenario* scn, flipopt_engine engine, uint64_t seed,
                                  int corrupt_index, const char* out_dir, int argc,
                                  const char* const* argv, flipopt_grad_check* out) {
    FLIPOPT_REQUIRE(scn);
    return guard([&] {
        const flipopt::GradCheckResult r = flipopt::run_check_grad(
            scn->config, to_engine(engine), seed, corrupt_index, str(out_dir), args(argc, argv));
        const auto& c = r.comparison;
        if (out)
            *out = {c.max_rel_error, c.max_abs_error, c.worst_index, c.worst_value,
                    c.worst_reference, r.loss,        r.engine_seconds, r.fd_seconds};
        if (!c.passed)
            return fail(FLIPOPT_TOLERANCE,
                        "gradient mismatch at index " + std::to_string(c.worst_index) + ": " +
                            flipopt::fmt_double(c.worst_value) + " vs finite difference " +
                            flipopt::fmt_double(c.worst_reference));
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_compare_engines(const flipopt_scenario* scn, flipopt_engine a,
                                       flipopt_engine b, const char* out_dir, int argc,
                                       const char* const* argv, flipopt_progress_fn progress,
                                       void* user, flipopt_engine_comparison* out) {
    FLIPOPT_REQUIRE(scn);
    return guard([&] {
        const flipopt::EngineComparison r = flipopt::run_compare_engines(
            scn->config, to_engine(a), to_engine(b), str(out_dir), args(argc, argv),
            progress_adapter(progress, user));
        if (out)
            *out = {r.gradient_mae,         r.controls_mae,         r.trajectory_mae,
                    r.tolerance,            r.a.loss.total,         r.b.loss.total,
                    r.a.peak_aux_bytes,     r.b.peak_aux_bytes,     r.a.optimize_seconds,
                    r.b.optimize_seconds};
        if (!r.passed)
            return fail(FLIPOPT_TOLERANCE, "engine MAE above " + flipopt::fmt_double(r.tolerance) +
                                               " (worst trajectory channel " +
                                               r.worst_trajectory_channel + ")");
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_plot(const char* run_dir, flipopt_plot_report* out) {
    FLIPOPT_REQUIRE(run_dir);
    return guard([&] {
        const flipopt::PlotReport r = flipopt::emit_plots(run_dir);
        if (out)
            *out = {static_cast<int>(r.files.size()), r.flip_y_over_L, r.flip_time_s,
                    r.peak_reduced_frequency};
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_replay(const char* manifest_path, const char* out_dir, int argc,
                              const char* const* argv, int* n_checked, char** mismatches) {
    FLIPOPT_REQUIRE(manifest_path);
    FLIPOPT_REQUIRE(out_dir);
    return guard([&] {
        const flipopt::ReplayReport r = flipopt::run_replay(manifest_path, out_dir, args(argc, argv));
        std::string bad;
        for (const auto& c : r.checks)
            if (!c.match) bad += c.file + " (" + c.expected + " -> " + c.actual + ")\n";
        if (n_checked) *n_checked = static_cast<int>(r.checks.size());
        if (mismatches) *mismatches = dup(bad);
        if (!r.all_match) return fail(FLIPOPT_TOLERANCE, "replayed outputs differ:\n" + bad);
        return FLIPOPT_OK;
    });
}

flipopt_status flipopt_hash_file(const char* path, uint64_t* out) {
    FLIPOPT_REQUIRE(path);
    FLIPOPT_REQUIRE(out);
    return guard([&] {
        *out = flipopt::fnv1a64(flipopt::read_file(path));
        return FLIPOPT_OK;
    });
}

}  // extern "C"
