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

// flipopt command-line tool. Thin layer over the C API.

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flipopt/flipopt.h"

namespace {

enum Exit : int { kOk = 0, kTolerance = 1, kConfig = 2, kNumeric = 3, kInternal = 4 };

int exit_code(flipopt_status s) {
    switch (s) {
        case FLIPOPT_OK: return kOk;
        case FLIPOPT_TOLERANCE: return kTolerance;
        case FLIPOPT_CONFIG:
        case FLIPOPT_IO:
        case FLIPOPT_INVALID_ARG: return kConfig;
        case FLIPOPT_NUMERIC: return kNumeric;
        case FLIPOPT_INTERNAL: return kInternal;
    }
    return kInternal;
}

int report(flipopt_status s) {
    if (s != FLIPOPT_OK)
        std::fprintf(stderr, "error (%s): %s\n", flipopt_status_name(s), flipopt_last_error());
    return exit_code(s);
}

struct Scenario {
    flipopt_scenario* h = nullptr;
    ~Scenario() { flipopt_scenario_free(h); }
};

struct Run {
    flipopt_run* h = nullptr;
    ~Run() { flipopt_run_free(h); }
};

/// argv as given, for the manifest.
struct Argv {
    std::vector<std::string> store;
    std::vector<const char*> ptrs;

    Argv(int argc, char** argv) : store(argv, argv + argc) {
        for (const auto& s : store) ptrs.push_back(s.c_str());
    }
    int argc() const { return static_cast<int>(ptrs.size()); }
    const char* const* argv() const { return ptrs.data(); }
};

/// Overrides shared by the scenario-based commands.
struct ScenarioArgs {
    std::string scenario;
    int steps = 0;
    std::string engine;
    std::string seed;
    int iterations = 0;
};

bool parse_seed(const std::string& text, std::uint64_t& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || *end != '\0' || text[0] == '-') return false;
    out = v;
    return true;
}

flipopt_status engine_from(const std::string& name, flipopt_engine& out) {
    if (name == "bptt") out = FLIPOPT_ENGINE_BPTT;
    else if (name == "adjoint") out = FLIPOPT_ENGINE_ADJOINT;
    else {
        std::fprintf(stderr, "error (config): unknown engine '%s' (expected bptt or adjoint)\n",
                     name.c_str());
        return FLIPOPT_CONFIG;
    }
    return FLIPOPT_OK;
}

/// Seed precedence: --seed, then FLIPOPT_SEED, then the scenario file.
flipopt_status resolve_seed(const std::string& flag, std::uint64_t fallback, std::uint64_t& out) {
    out = fallback;
    if (const char* env = std::getenv("FLIPOPT_SEED"); env && *env) {
        if (!parse_seed(env, out)) {
            std::fprintf(stderr, "error (config): FLIPOPT_SEED='%s' is not an unsigned integer\n", env);
            return FLIPOPT_CONFIG;
        }
    }
    if (!flag.empty() && !parse_seed(flag, out)) {
        std::fprintf(stderr, "error (config): --seed '%s' is not an unsigned integer\n", flag.c_str());
        return FLIPOPT_CONFIG;
    }
    return FLIPOPT_OK;
}

/// Loads the scenario and applies command-line overrides. Prints its own errors.
int load(const ScenarioArgs& a, Scenario& scn) {
    flipopt_status s = flipopt_scenario_load(a.scenario.c_str(), &scn.h);
    if (s != FLIPOPT_OK) return report(s);
    if (a.steps > 0 && (s = flipopt_scenario_set_steps(scn.h, a.steps)) != FLIPOPT_OK) return report(s);
    if (a.iterations > 0 && (s = flipopt_scenario_set_iterations(scn.h, a.iterations)) != FLIPOPT_OK)
        return report(s);
    if (!a.engine.empty()) {
        flipopt_engine e;
        if (engine_from(a.engine, e) != FLIPOPT_OK) return kConfig;
        if ((s = flipopt_scenario_set_engine(scn.h, e)) != FLIPOPT_OK) return report(s);
    }
    std::uint64_t seed = 0;
    if (resolve_seed(a.seed, flipopt_scenario_seed(scn.h), seed) != FLIPOPT_OK) return kConfig;
    flipopt_scenario_set_seed(scn.h, seed);
    return kOk;
}

struct ProgressState {
    int every = 0;
    bool quiet = false;
};

void on_progress(int step, double lr, double loss, void* user) {
    const auto* p = static_cast<const ProgressState*>(user);
    if (p->quiet || p->every <= 0 || step % p->every != 0) return;
    std::fprintf(stderr, "step %6d  lr %.3e  loss %.6e\n", step, lr, loss);
}

void print_summary(const flipopt_run* run) {
    flipopt_run_summary s{};
    flipopt_run_summary_get(run, &s);
    const flipopt_residuals& r = s.residuals;
    std::printf("engine            %s\n", flipopt_run_engine(run));
    std::printf("loss              %.6e\n", s.loss);
    if (s.best_step >= 0) std::printf("best step         %d of %d\n", s.best_step, s.iterations);
    std::printf("|r - r_f|         %.4f m\n", r.position_error_m);
    std::printf("|v - v_f|         %.4f m/s\n", r.velocity_error_mps);
    std::printf("speed error       %.4f m/s\n", r.speed_error_mps);
    std::printf("pitch error       %.4f deg\n", r.pitch_error_deg);
    std::printf("omega_f           %.5f rad/s\n", r.omega_radps);
    std::printf("min mass          %.1f kg\n", r.min_mass_kg);
    std::printf("flip at           y/L = %.2f, t = %.2f s\n", r.flip_y_over_L, r.flip_time_s);
    std::printf("wall time         %.2f s\n", s.wall_seconds);
}

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a, bool with_engine) {
    cmd->add_option("--scenario", a.scenario, "preset name (case1, case2) or scenario JSON path")
        ->required();
    cmd->add_option("--steps", a.steps, "number of integration steps K (dt is kept)")
        ->check(CLI::PositiveNumber);
    if (with_engine)
        cmd->add_option("--engine", a.engine, "gradient engine")->check(CLI::IsMember({"bptt", "adjoint"}));
    cmd->add_option("--seed", a.seed, "seed (overrides FLIPOPT_SEED and the scenario)");
}

}  // namespace

int main(int argc, char** argv) {
    const Argv recorded(argc, argv);
    CLI::App app{"Trajectory optimization for the flip-and-land manoeuvre"};
    app.require_subcommand(1);
    app.set_version_flag("--version", flipopt_version());

    // optimize
    ScenarioArgs opt_args;
    std::string opt_out;
    bool opt_quiet = false;
    auto* optimize = app.add_subcommand("optimize", "optimize the control sequence");
    add_scenario_options(optimize, opt_args, true);
    optimize->add_option("--iters", opt_args.iterations, "Adam iterations (default from scenario)")
        ->check(CLI::PositiveNumber);
    optimize->add_option("--out", opt_out, "output directory")->required();
    optimize->add_flag("--quiet", opt_quiet, "no progress lines");

    // simulate
    ScenarioArgs sim_args;
    std::string sim_controls, sim_out;
    bool sim_no_aero = false;
    auto* simulate = app.add_subcommand("simulate", "roll out a controls CSV without optimizing");
    add_scenario_options(simulate, sim_args, false);
    simulate->add_option("--controls", sim_controls, "controls CSV (k,t_s,thrust_N,delta_deg)")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();
    simulate->add_flag("--no-aero", sim_no_aero, "switch aerodynamic loads off");

    // train-aero
    int train_samples = 36;
    std::string train_out, train_seed;
    auto* train = app.add_subcommand("train-aero", "fit the aerodynamic surrogate to the stand-in data");
    train->add_option("--samples", train_samples, "number of training angles")->capture_default_str();
    train->add_option("--out", train_out, "weights JSON path")->required();
    train->add_option("--seed", train_seed, "initialisation seed (default FLIPOPT_SEED or 0)");

    // check-grad
    ScenarioArgs grad_args;
    grad_args.steps = 10;
    std::string grad_out = "runs/check-grad";
    int grad_corrupt = -1;
    auto* check = app.add_subcommand("check-grad", "compare a gradient engine with finite differences");
    check->add_option("--scenario", grad_args.scenario, "preset name or scenario JSON path")->required();
    check->add_option("--k", grad_args.steps, "number of integration steps")->capture_default_str()->check(CLI::PositiveNumber);
    check->add_option("--engine", grad_args.engine, "gradient engine")
        ->check(CLI::IsMember({"bptt", "adjoint"}));
    check->add_option("--seed", grad_args.seed, "seed of the random evaluation point");
    check->add_option("--out", grad_out, "report directory")->capture_default_str();
    check->add_option("--corrupt-index", grad_corrupt, "perturb one gradient entry (harness test)")
        ->group("");

    // compare-engines
    ScenarioArgs cmp_args;
    cmp_args.scenario = "case2";
    cmp_args.steps = 90;
    std::string cmp_a = "bptt", cmp_b = "adjoint", cmp_out = "runs/compare-engines";
    bool cmp_quiet = false;
    auto* compare = app.add_subcommand("compare-engines", "BPTT versus adjoint gradients and optima");
    compare->add_option("--scenario", cmp_args.scenario, "preset name or scenario JSON path")->capture_default_str();
    compare->add_option("--k", cmp_args.steps, "number of integration steps")->capture_default_str()->check(CLI::PositiveNumber);
    compare->add_option("--iters", cmp_args.iterations, "Adam iterations per engine")
        ->check(CLI::PositiveNumber);
    compare->add_option("--engine-a", cmp_a, "first engine")->capture_default_str()->check(CLI::IsMember({"bptt", "adjoint"}));
    compare->add_option("--engine-b", cmp_b, "second engine")->capture_default_str()->check(CLI::IsMember({"bptt", "adjoint"}));
    compare->add_option("--seed", cmp_args.seed, "seed of the random gradient point");
    compare->add_option("--out", cmp_out, "report directory")->capture_default_str();
    compare->add_flag("--quiet", cmp_quiet, "no progress lines");

    // plot
    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "write SVG figures for a run directory");
    plot->add_option("run_dir", plot_dir, "directory containing trajectory.csv")->required();

    // replay
    std::string replay_manifest, replay_out;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare its CSV outputs");
    replay->add_option("--manifest", replay_manifest, "manifest JSON")->required();
    replay->add_option("--out", replay_out, "directory for the re-run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    if (optimize->parsed()) {
        Scenario scn;
        if (int rc = load(opt_args, scn)) return rc;
        ProgressState ps{opt_args.iterations > 0 ? std::max(1, opt_args.iterations / 10) : 500,
                         opt_quiet};
        Run run;
        const flipopt_status s = flipopt_optimize(scn.h, opt_out.c_str(), recorded.argc(),
                                                  recorded.argv(), on_progress, &ps, &run.h);
        if (s != FLIPOPT_OK) return report(s);
        print_summary(run.h);
        flipopt_run_summary sum{};
        flipopt_run_summary_get(run.h, &sum);
        if (!sum.residuals_finite) {
            std::fprintf(stderr, "error (numeric): terminal residuals are not finite\n");
            return kNumeric;
        }
        return kOk;
    }

    if (simulate->parsed()) {
        Scenario scn;
        if (int rc = load(sim_args, scn)) return rc;
        Run run;
        const flipopt_status s = flipopt_simulate(scn.h, sim_controls.c_str(), sim_no_aero ? 1 : 0,
                                                  sim_out.c_str(), recorded.argc(), recorded.argv(),
                                                  &run.h);
        if (s != FLIPOPT_OK) return report(s);
        print_summary(run.h);
        return kOk;
    }

    if (train->parsed()) {
        std::uint64_t seed = 0;
        if (resolve_seed(train_seed, 0, seed) != FLIPOPT_OK) return kConfig;
        flipopt_fit_report fit{};
        const flipopt_status s = flipopt_train_aero(train_samples, seed, train_out.c_str(),
                                                    recorded.argc(), recorded.argv(), &fit);
        if (s != FLIPOPT_OK) return report(s);
        std::printf("samples %d, seed %" PRIu64 ", epochs %d, mse %.3e\n", fit.samples, seed,
                    fit.epochs, fit.mse);
        std::printf("max abs error  C_L %.3e  C_D %.3e  C_M %.3e\n", fit.max_abs_error[0],
                    fit.max_abs_error[1], fit.max_abs_error[2]);
        return kOk;
    }

    if (check->parsed()) {
        Scenario scn;
        if (int rc = load(grad_args, scn)) return rc;
        flipopt_engine e = FLIPOPT_ENGINE_BPTT;
        if (!grad_args.engine.empty() && engine_from(grad_args.engine, e) != FLIPOPT_OK) return kConfig;
        flipopt_grad_check g{};
        const flipopt_status s =
            flipopt_check_grad(scn.h, e, flipopt_scenario_seed(scn.h), grad_corrupt, grad_out.c_str(),
                               recorded.argc(), recorded.argv(), &g);
        if (s != FLIPOPT_OK && s != FLIPOPT_TOLERANCE) return report(s);
        std::printf("K %d, seed %" PRIu64 ", loss %.6e\n", flipopt_scenario_steps(scn.h),
                    flipopt_scenario_seed(scn.h), g.loss);
        std::printf("max rel error %.3e (tol 1e-5), max abs error %.3e (tol 1e-8)\n",
                    g.max_rel_error, g.max_abs_error);
        std::printf("worst index %d: engine %.17g, finite difference %.17g\n", g.worst_index,
                    g.worst_value, g.worst_reference);
        std::printf("%s\n", s == FLIPOPT_OK ? "PASS" : "FAIL");
        return report(s);
    }

    if (compare->parsed()) {
        Scenario scn;
        if (int rc = load(cmp_args, scn)) return rc;
        flipopt_engine a, b;
        engine_from(cmp_a, a);
        engine_from(cmp_b, b);
        ProgressState ps{1000, cmp_quiet};
        flipopt_engine_comparison c{};
        const flipopt_status s =
            flipopt_compare_engines(scn.h, a, b, cmp_out.c_str(), recorded.argc(), recorded.argv(),
                                    on_progress, &ps, &c);
        if (s != FLIPOPT_OK && s != FLIPOPT_TOLERANCE) return report(s);
        std::printf("gradient MAE    %.3e\n", c.gradient_mae);
        std::printf("controls MAE    %.3e\n", c.controls_mae);
        std::printf("trajectory MAE  %.3e\n", c.trajectory_mae);
        std::printf("tolerance       %.3e\n", c.tolerance);
        std::printf("loss            %s %.6e, %s %.6e\n", cmp_a.c_str(), c.loss_a, cmp_b.c_str(), c.loss_b);
        std::printf("peak aux bytes  %s %zu, %s %zu\n", cmp_a.c_str(), c.peak_aux_bytes_a,
                    cmp_b.c_str(), c.peak_aux_bytes_b);
        std::printf("report          %s/compare_engines.json\n", cmp_out.c_str());
        return report(s);
    }

    if (plot->parsed()) {
        flipopt_plot_report p{};
        const flipopt_status s = flipopt_plot(plot_dir.c_str(), &p);
        if (s != FLIPOPT_OK) return report(s);
        std::printf("wrote %d figures to %s\n", p.n_files, plot_dir.c_str());
        std::printf("flip at y/L = %.2f (t = %.2f s), peak reduced frequency %.3f\n", p.flip_y_over_L,
                    p.flip_time_s, p.peak_reduced_frequency);
        return kOk;
    }

    if (replay->parsed()) {
        int n = 0;
        char* bad = nullptr;
        const flipopt_status s = flipopt_replay(replay_manifest.c_str(), replay_out.c_str(),
                                                recorded.argc(), recorded.argv(), &n, &bad);
        if (s == FLIPOPT_OK) std::printf("%d CSV outputs reproduced byte-for-byte\n", n);
        flipopt_string_free(bad);
        return report(s);
    }
    return kOk;
}
