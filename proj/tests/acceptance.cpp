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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flipopt/commands.hpp"
#include "flipopt/gradients.hpp"
#include "flipopt/io.hpp"
#include "flipopt/optimizer.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flipopt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", n, title,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// ---- 1 ----------------------------------------------------------------------

Outcome gradient_correctness() {
    const auto t0 = Clock::now();
    double worst_rel = 0.0, worst_abs = 0.0;
    bool ok = true;
    int checks = 0;
    for (const char* preset : {"case1", "case2"}) {
        ScenarioConfig c = load_scenario(preset);
        set_step_count(c, 10);
        const NondimScenario s = nondimensionalize(c);
        const AeroModel aero = make_aero(c);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const RawControls raw = random_raw_controls(10, seed);
            const GradientReport fd = finite_diff_grad(raw, s, aero, 1e-6);
            for (GradientEngine e : {GradientEngine::bptt, GradientEngine::adjoint}) {
                const GradientComparison cmp = compare_gradients(compute_gradient(e, raw, s, aero), fd);
                ok = ok && cmp.passed;
                worst_rel = std::max(worst_rel, cmp.max_rel_error);
                worst_abs = std::max(worst_abs, cmp.max_abs_error);
                ++checks;
            }
        }
    }
    const double t = seconds_since(t0);
    return {ok && t < 30.0,
            std::to_string(checks) + " engine/FD comparisons, " +
                fmt("max rel %.2e (< 1e-5), max abs %.2e (< 1e-8), %.2f s (< 30 s)", worst_rel,
                    worst_abs, t)};
}

// ---- 2 ----------------------------------------------------------------------

Outcome engine_equivalence() {
    ScenarioConfig c = load_scenario("case2");
    set_step_count(c, 90);
    const auto dir = test::scratch("acceptance_compare");
    const EngineComparison r =
        run_compare_engines(c, GradientEngine::bptt, GradientEngine::adjoint, dir.string(), {});
    const bool ok = r.gradient_mae < 5e-3 && r.controls_mae < 5e-3 && r.trajectory_mae < 5e-3;
    return {ok, fmt("K=90 case2, MAE gradient %.2e, controls %.2e, trajectory %.2e (< 5e-3)",
                    r.gradient_mae, r.controls_mae, r.trajectory_mae)};
}

// ---- 3 ----------------------------------------------------------------------

Outcome memory_contract() {
    std::size_t b[2], a[2];
    const int Ks[2] = {90, 180};
    for (int i = 0; i < 2; ++i) {
        ScenarioConfig c = load_scenario("case2");
        set_step_count(c, Ks[i]);
        const NondimScenario s = nondimensionalize(c);
        const AeroModel aero = make_aero(c);
        const RawControls raw = initial_raw_controls(s);
        b[i] = grad_bptt(raw, s, aero).peak_aux_bytes;
        a[i] = grad_adjoint(raw, s, aero).peak_aux_bytes;
    }
    const double ra = static_cast<double>(a[1]) / a[0];
    const double rb = static_cast<double>(b[1]) / b[0];
    std::ostringstream d;
    d << "adjoint " << a[0] << " -> " << a[1] << " B (ratio " << fmt("%.3f", ra) << " <= 1.25), bptt "
      << b[0] << " -> " << b[1] << " B (ratio " << fmt("%.3f", rb) << " > 1.8)";
    return {ra <= 1.25 && rb > 1.8, d.str()};
}

// ---- 4, 5 -------------------------------------------------------------------

Outcome convergence(const char* preset) {
    const ScenarioConfig c = load_scenario(preset);
    if (c.opt.n_steps > 5000) return {false, "preset asks for more than 5000 Adam steps"};
    const NondimScenario s = nondimensionalize(c);
    const OptimizationResult r = optimize(s, make_aero(c), c.opt);
    const TerminalResiduals t = terminal_residuals(r.trajectory, c);
    double min_mass = std::numeric_limits<double>::infinity();
    for (const VehicleState& x : r.trajectory.states)
        min_mass = std::min(min_mass, x.m() * c.refs.mass_kg);
    const bool ok = t.position_error_m < 1.0 && t.velocity_error_mps < 0.5 &&
                    std::abs(t.pitch_error_deg) < 1.0 && std::abs(t.omega_radps) < 0.01 &&
                    min_mass >= c.vehicle.dry_mass_kg;
    std::ostringstream d;
    d << c.opt.n_steps << " Adam steps, " << fmt("|r-rf| %.3g m, |v-vf| %.3g m/s, ", t.position_error_m,
                                                 t.velocity_error_mps)
      << fmt("theta err %.3g deg, omega %.3g rad/s, ", t.pitch_error_deg, t.omega_radps)
      << fmt("min mass %.1f kg (dry %.0f); flip at y/L %.2f", min_mass, c.vehicle.dry_mass_kg,
             t.flip_y_over_L);
    return {ok, d.str()};
}

// ---- 6 ----------------------------------------------------------------------

Outcome feasibility() {
    const NondimScenario s = nondimensionalize(load_scenario("case1"));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    std::normal_distribution<double> n01(0.0, 1.0);
    long checked = 0, violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        RawControls raw(s.steps);
        const double scale = std::pow(10.0, expo(rng));  // 1e-3 .. 1e3
        for (int k = 0; k < s.steps; ++k) {
            raw.thrust[k] = scale * n01(rng);
            raw.gimbal[k] = scale * n01(rng);
        }
        const ControlSequence u = reparameterize(raw, s);
        for (int k = 0; k < s.steps; ++k) {
            ++checked;
            if (!(u.thrust[k] >= s.min_thrust && u.thrust[k] <= s.max_thrust &&
                  u.gimbal[k] >= -s.max_gimbal && u.gimbal[k] <= s.max_gimbal))
                ++violations;
        }
    }
    return {violations == 0, "10000 vectors, " + std::to_string(checked) + " commands, " +
                                 std::to_string(violations) + " outside 25-100% throttle or +/-10 deg"};
}

// ---- 7 ----------------------------------------------------------------------

Outcome integrator_oracles() {
    const double proj = oracle::projectile_error();
    const double lag = oracle::lag_error(10);
    const double ratio = oracle::rk4_halving_ratio();
    const bool ok = proj <= 1e-12 && lag <= 1e-6 && ratio >= 14.0 && ratio <= 18.0;
    return {ok, fmt("projectile rel err %.2e (<= 1e-12), lag err %.2e at dt = T_d/10 (<= 1e-6), "
                    "RK4 halving ratio %.3f (in [14, 18])",
                    proj, lag, ratio)};
}

// ---- 8 ----------------------------------------------------------------------

Outcome surrogate_fidelity() {
    const auto data = generate_dataset(36);
    const auto dir = test::scratch("acceptance_train");
    const FitReport fresh = run_train_aero(36, 7, (dir / "weights.json").string(), {});
    const MlpSurrogate shipped = load_weights("builtin:case2");
    double shipped_err = 0.0;
    for (const CoeffSample& s : data) {
        const auto c = mlp_forward(shipped, s.alpha);
        shipped_err = std::max({shipped_err, std::abs(c[0] - s.lift), std::abs(c[1] - s.drag),
                                std::abs(c[2] - s.moment)});
    }
    const double fresh_err =
        std::max({fresh.max_abs_error[0], fresh.max_abs_error[1], fresh.max_abs_error[2]});
    // Dyadic angles make a + 2 pi k exact, so periodicity can be compared bit for bit.
    int periodic_fail = 0, periodic_checked = 0;
    for (int j = -64; j <= 64; ++j) {
        const double a = j / 8.0;
        for (int k : {-2, -1, 1, 2, 3}) {
            ++periodic_checked;
            if (mlp_forward(shipped, a) != mlp_forward(shipped, a + 2 * kPi * k)) ++periodic_fail;
        }
    }
    const bool ok = fresh_err < 0.01 && shipped_err < 0.01 && periodic_fail == 0;
    return {ok, fmt("max abs error fresh %.2e, shipped %.2e (< 0.01); ", fresh_err, shipped_err) +
                    std::to_string(periodic_checked - periodic_fail) + "/" +
                    std::to_string(periodic_checked) + " shifted angles bit-identical"};
}

// ---- 9 ----------------------------------------------------------------------

std::vector<std::string> csv_files(const test::fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& e : test::fs::directory_iterator(dir))
        if (e.path().extension() == ".csv") out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

Outcome cli_determinism() {
    const auto root = test::scratch("acceptance_replay");
    const std::string cli = test::cli();
    struct Case {
        std::string name, args;
        test::fs::path run_dir;
    };
    const std::vector<Case> cases = {
        {"optimize", "optimize --scenario case2 --iters 200 --quiet --out " + test::q(root / "optimize"),
         root / "optimize"},
        {"simulate", "simulate --scenario case2 --controls " + test::q(root / "optimize" / "controls.csv") +
                         " --out " + test::q(root / "simulate"),
         root / "simulate"},
        {"train-aero", "train-aero --samples 36 --seed 7 --out " + test::q(root / "train" / "w.json"),
         root / "train"},
        {"check-grad", "check-grad --scenario case2 --k 10 --seed 3 --out " + test::q(root / "grad"),
         root / "grad"},
        {"compare-engines", "compare-engines --scenario case2 --k 30 --iters 50 --quiet --out " +
                                test::q(root / "compare"),
         root / "compare"},
    };
    test::fs::create_directories(root / "train");
    std::string detail;
    bool ok = true;
    int files = 0;
    for (const Case& c : cases) {
        const auto r = test::run(cli + " " + c.args);
        if (r.code != 0) {
            ok = false;
            detail += c.name + " exited " + std::to_string(r.code) + "; ";
            continue;
        }
        const test::fs::path manifest =
            c.name == "train-aero" ? c.run_dir / "w.manifest.json" : c.run_dir / "manifest.json";
        const test::fs::path again = root / (c.name + "_replay");
        const auto rp = test::run(cli + " replay --manifest " + test::q(manifest) + " --out " + test::q(again));
        if (rp.code != 0) {
            ok = false;
            detail += c.name + " replay exited " + std::to_string(rp.code) + "; ";
            continue;
        }
        const auto names = csv_files(c.run_dir);
        if (names.empty()) {
            ok = false;
            detail += c.name + " wrote no CSV; ";
        }
        for (const std::string& f : names) {
            ++files;
            if (test::slurp(c.run_dir / f) != test::slurp(again / f)) {
                ok = false;
                detail += c.name + "/" + f + " differs; ";
            }
        }
    }
    if (ok) detail = "5 commands replayed, " + std::to_string(files) + " CSV files byte-identical";
    return {ok, detail};
}

}  // namespace

int main() {
    criterion(1, "gradient correctness", gradient_correctness);
    criterion(2, "engine equivalence", engine_equivalence);
    criterion(3, "adjoint memory", memory_contract);
    criterion(4, "case1 convergence", [] { return convergence("case1"); });
    criterion(5, "case2 convergence", [] { return convergence("case2"); });
    criterion(6, "constraint feasibility", feasibility);
    criterion(7, "integrator oracles", integrator_oracles);
    criterion(8, "surrogate fidelity", surrogate_fidelity);
    criterion(9, "replay determinism", cli_determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
