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

#include "flipopt/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "flipopt/error.hpp"

namespace flipopt {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string digest_of_file(const std::string& path) { return hex64(fnv1a64(read_file(path))); }

std::string absolute(const std::string& path) {
    return fs::absolute(fs::path(path)).lexically_normal().string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

/// Writes `name` under `dir` and records it.
void emit(const std::string& dir, const std::string& name, const std::string& content,
          std::vector<std::string>& files) {
    write_file((fs::path(dir) / name).string(), content);
    files.push_back(name);
}

json loss_json(const LossBreakdown& l) {
    json j;
    j["total"] = l.total;
    for (int i = 0; i < kLossTerms; ++i) j[kLossTermNames[i]] = l.terms[i];
    return j;
}

json residuals_json(const TerminalResiduals& r) {
    return {{"position_error_m", r.position_error_m},
            {"velocity_error_mps", r.velocity_error_mps},
            {"speed_error_mps", r.speed_error_mps},
            {"pitch_error_deg", r.pitch_error_deg},
            {"omega_radps", r.omega_radps},
            {"min_mass_kg", r.min_mass_kg}};
}

json final_state_json(const Trajectory& traj, const ScenarioConfig& c) {
    const SiState s = redimensionalize(traj.states.back(), c.refs);
    return {{"x_m", s.x_m},
            {"y_m", s.y_m},
            {"theta_deg", s.theta_rad * kRadToDeg},
            {"u_mps", s.u_mps},
            {"v_mps", s.v_mps},
            {"omega_radps", s.omega_radps},
            {"mass_kg", s.mass_kg},
            {"delta_d_deg", s.delta_d_rad * kRadToDeg}};
}

bool all_finite(const TerminalResiduals& r) {
    return std::isfinite(r.position_error_m) && std::isfinite(r.velocity_error_mps) &&
           std::isfinite(r.speed_error_mps) && std::isfinite(r.pitch_error_deg) &&
           std::isfinite(r.omega_radps) && std::isfinite(r.min_mass_kg);
}

/// Hash of whatever the surrogate was actually loaded from.
void record_aero_input(const ScenarioConfig& c, RunManifest& m) {
    if (c.aero.kind != AeroKind::surrogate) return;
    const std::string& w = c.aero.weights_path;
    if (w.rfind("builtin:", 0) == 0)
        m.inputs.push_back({w, hex64(fnv1a64(weights_to_json(load_weights(w))))});
    else
        m.inputs.push_back({absolute(w), digest_of_file(w)});
}

RunManifest base_manifest(const std::string& command, const std::vector<std::string>& argv,
                          const ScenarioConfig* config) {
    RunManifest m;
    m.command = command;
    m.argv = argv;
    if (config) {
        m.scenario_json = scenario_to_json(*config);
        m.seed = config->seed;
        record_aero_input(*config, m);
    }
    return m;
}

void write_manifest(RunManifest& m, const std::string& dir, const std::string& name,
                    const std::vector<std::string>& files) {
    m.outputs.clear();
    for (const std::string& f : files)
        m.outputs.push_back({f, digest_of_file((fs::path(dir) / f).string())});
    write_file((fs::path(dir) / name).string(), manifest_to_json(m));
}

json run_summary_json(const RunResult& r, const ScenarioConfig& c) {
    json j;
    j["command"] = r.command;
    j["scenario"] = c.name;
    j["engine"] = r.engine;
    j["aero"] = c.aero.kind == AeroKind::simplified  ? "simplified"
                : c.aero.kind == AeroKind::surrogate ? "surrogate"
                                                     : "none";
    j["K"] = c.steps;
    j["dt_s"] = c.dt_s;
    j["t_f_s"] = c.horizon_s();
    j["seed"] = c.seed;
    j["iterations"] = r.iterations;
    j["best_step"] = r.best_step;
    j["wall_time_s"] = r.wall_seconds;
    j["residuals_finite"] = r.residuals_finite;
    j["terminal"] = residuals_json(r.residuals);
    j["final_state"] = final_state_json(r.trajectory, c);
    j["loss"] = loss_json(r.loss);
    j["flip"] = {{"y_over_L", r.residuals.flip_y_over_L}, {"time_s", r.residuals.flip_time_s}};
    j["saturated_params"] = r.saturated_params;
    j["warnings"] = r.warnings;
    return j;
}

/// Trajectory CSV, controls CSV, summary and scenario snapshot.
void write_run(RunResult& r, const ScenarioConfig& c, const std::string& out_dir,
               const std::string& controls_text) {
    emit(out_dir, "trajectory.csv", trajectory_csv(r.trajectory, c), r.files);
    if (!controls_text.empty()) emit(out_dir, "controls.csv", controls_text, r.files);
    emit(out_dir, "scenario.json", scenario_to_json(c), r.files);
    // Listed before it is written so the manifest and the result agree on outputs.
    r.files.push_back("summary.json");
    write_file((fs::path(out_dir) / "summary.json").string(), run_summary_json(r, c).dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> flat(const GradientReport& g) {
    std::vector<double> out = g.thrust;
    out.insert(out.end(), g.gimbal.begin(), g.gimbal.end());
    return out;
}

GradientEngine engine_from_name(const std::string& s) {
    if (s == "bptt") return GradientEngine::bptt;
    if (s == "adjoint") return GradientEngine::adjoint;
    if (s == "finite_diff") return GradientEngine::finite_diff;
    throw ConfigError("engine", "unknown engine '" + s + "' (expected bptt or adjoint)");
}

const std::string& param(const RunManifest& m, const std::string& key) {
    auto it = m.params.find(key);
    if (it == m.params.end()) throw ConfigError("params." + key, "missing from manifest");
    return it->second;
}

}  // namespace

// ---- manifest -------------------------------------------------------------------

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["argv"] = m.argv;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["params"] = json::object();
    for (const auto& [k, v] : m.params) j["params"][k] = v;
    j["scenario"] = m.scenario_json.empty() ? json() : json::parse(m.scenario_json);
    auto digests = [](const std::vector<FileDigest>& ds) {
        json a = json::array();
        for (const FileDigest& d : ds) a.push_back({{"path", d.path}, {"fnv1a64", d.fnv1a}});
        return a;
    };
    j["inputs"] = digests(m.inputs);
    j["outputs"] = digests(m.outputs);
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("manifest", source + ": " + e.what());
    }
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.version = j.at("version").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("params").items()) m.params[k] = v.get<std::string>();
        if (!j.at("scenario").is_null()) m.scenario_json = j.at("scenario").dump(2);
        for (const auto& d : j.at("inputs"))
            m.inputs.push_back({d.at("path").get<std::string>(), d.at("fnv1a64").get<std::string>()});
        for (const auto& d : j.at("outputs"))
            m.outputs.push_back({d.at("path").get<std::string>(), d.at("fnv1a64").get<std::string>()});
    } catch (const json::exception& e) {
        throw ConfigError("manifest", source + ": " + e.what());
    }
    return m;
}

// ---- optimize / simulate --------------------------------------------------------

RunResult run_optimize(const ScenarioConfig& config, const std::string& out_dir,
                       const std::vector<std::string>& argv, const ProgressCallback& progress) {
    const NondimScenario scn = nondimensionalize(config);
    const AeroModel aero = make_aero(config);
    RunManifest manifest = base_manifest("optimize", argv, &config);
    if (!out_dir.empty()) ensure_dir(out_dir);

    OptimizationResult opt;
    try {
        opt = optimize(scn, aero, config.opt, progress);
    } catch (const OptimizationAborted& e) {
        if (!out_dir.empty()) {
            json snap;
            snap["error"] = e.what();
            snap["step"] = e.index();
            snap["raw_thrust"] = e.snapshot().thrust;
            snap["raw_gimbal"] = e.snapshot().gimbal;
            std::vector<std::string> files;
            emit(out_dir, "abort_snapshot.json", snap.dump(2) + "\n", files);
            emit(out_dir, "scenario.json", scenario_to_json(config), files);
            write_manifest(manifest, out_dir, "manifest.json", files);
        }
        throw;
    }

    RunResult r;
    r.command = "optimize";
    r.engine = engine_name(config.opt.engine);
    r.best_step = opt.best_step;
    r.iterations = config.opt.n_steps;
    r.saturated_params = opt.saturated_params;
    r.wall_seconds = opt.wall_seconds;
    r.warnings = opt.warnings;

    const std::string controls_text = controls_csv(opt.trajectory.controls, config);
    const ControlSequence replayed = parse_controls_csv(controls_text, config, config.steps);
    r.trajectory = simulate(replayed, scn, aero);
    r.loss = loss(r.trajectory, scn);
    r.residuals = terminal_residuals(r.trajectory, config);
    r.residuals_finite = all_finite(r.residuals);

    if (!out_dir.empty()) {
        emit(out_dir, "loss_history.csv", loss_history_csv(opt.history), r.files);
        write_run(r, config, out_dir, controls_text);
        write_manifest(manifest, out_dir, "manifest.json", r.files);
        r.files.push_back("manifest.json");
    }
    return r;
}

RunResult run_simulate(ScenarioConfig config, const std::string& controls_path, bool no_aero,
                       const std::string& out_dir, const std::vector<std::string>& argv) {
    if (no_aero) config.aero.kind = AeroKind::none;
    const auto t0 = std::chrono::steady_clock::now();
    const NondimScenario scn = nondimensionalize(config);
    const AeroModel aero = make_aero(config);
    const std::string text = read_file(controls_path);
    const ControlSequence controls = parse_controls_csv(text, config, config.steps);

    RunManifest manifest = base_manifest("simulate", argv, &config);
    manifest.params["controls"] = absolute(controls_path);
    manifest.params["no_aero"] = no_aero ? "1" : "0";
    manifest.inputs.push_back({absolute(controls_path), hex64(fnv1a64(text))});

    RunResult r;
    r.command = "simulate";
    r.engine = "none";
    r.trajectory = simulate(controls, scn, aero);
    r.loss = loss(r.trajectory, scn);
    r.residuals = terminal_residuals(r.trajectory, config);
    r.residuals_finite = all_finite(r.residuals);
    r.wall_seconds = seconds_since(t0);

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        write_run(r, config, out_dir, "");
        write_manifest(manifest, out_dir, "manifest.json", r.files);
        r.files.push_back("manifest.json");
    }
    return r;
}

// ---- train-aero -----------------------------------------------------------------

FitReport run_train_aero(int samples, std::uint64_t seed, const std::string& weights_out,
                         const std::vector<std::string>& argv) {
    if (samples < kMinAeroSamples)
        throw ConfigError("samples", "need at least " + std::to_string(kMinAeroSamples) +
                                         " samples, got " + std::to_string(samples));
    if (weights_out.empty()) throw ConfigError("out", "output path required");
    const std::vector<CoeffSample> data = generate_dataset(samples);
    const TrainerConfig hyper;
    const MlpSurrogate model = train_surrogate(data, hyper, seed);

    FitReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.epochs = model.meta.epochs;
    rep.mse = surrogate_mse(model, data);
    for (const CoeffSample& s : data) {
        const auto c = mlp_forward(model, s.alpha);
        rep.max_abs_error[0] = std::max(rep.max_abs_error[0], std::abs(c[0] - s.lift));
        rep.max_abs_error[1] = std::max(rep.max_abs_error[1], std::abs(c[1] - s.drag));
        rep.max_abs_error[2] = std::max(rep.max_abs_error[2], std::abs(c[2] - s.moment));
    }

    const fs::path out(weights_out);
    const std::string dir = out.parent_path().empty() ? "." : out.parent_path().string();
    ensure_dir(dir);
    const std::string stem = out.stem().string();
    emit(dir, out.filename().string(), weights_to_json(model), rep.files);
    emit(dir, stem + ".dataset.csv", dataset_csv(data), rep.files);
    json fit;
    fit["samples"] = samples;
    fit["seed"] = seed;
    fit["epochs"] = rep.epochs;
    fit["mse"] = rep.mse;
    fit["max_abs_error"] = {{"C_L", rep.max_abs_error[0]},
                            {"C_D", rep.max_abs_error[1]},
                            {"C_M", rep.max_abs_error[2]}};
    emit(dir, stem + ".fit.json", fit.dump(2) + "\n", rep.files);

    RunManifest m = base_manifest("train-aero", argv, nullptr);
    m.seed = seed;
    m.params["samples"] = std::to_string(samples);
    m.params["out"] = out.filename().string();
    write_manifest(m, dir, stem + ".manifest.json", rep.files);
    rep.files.push_back(stem + ".manifest.json");
    return rep;
}

// ---- check-grad -----------------------------------------------------------------

GradCheckResult run_check_grad(const ScenarioConfig& config, GradientEngine engine,
                               std::uint64_t seed, int corrupt_index, const std::string& out_dir,
                               const std::vector<std::string>& argv) {
    if (engine == GradientEngine::finite_diff)
        throw ConfigError("engine", "check-grad compares bptt or adjoint against finite differences");
    const NondimScenario scn = nondimensionalize(config);
    const AeroModel aero = make_aero(config);
    const int K = config.steps;
    if (corrupt_index >= 2 * K)
        throw ConfigError("corrupt_index", "must be < 2K = " + std::to_string(2 * K));

    const RawControls raw = random_raw_controls(K, seed);
    GradientReport g = compute_gradient(engine, raw, scn, aero, config.opt.checkpoint_slots);
    if (corrupt_index >= 0) {
        double& x = corrupt_index < K ? g.thrust[corrupt_index] : g.gimbal[corrupt_index - K];
        x = x * (1.0 + 1e-3) + 1e-6;
    }
    const GradientReport fd = finite_diff_grad(raw, scn, aero);

    GradCheckResult r;
    r.engine = engine;
    r.steps = K;
    r.seed = seed;
    r.loss = fd.loss.total;
    r.comparison = compare_gradients(g, fd);
    r.engine_seconds = g.wall_seconds;
    r.fd_seconds = fd.wall_seconds;

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        std::string csv = "index,channel,step,engine,finite_diff,abs_error,rel_error\n";
        const auto ge = flat(g), gf = flat(fd);
        for (int i = 0; i < 2 * K; ++i) {
            const double err = std::abs(ge[i] - gf[i]);
            csv += std::to_string(i) + "," + (i < K ? "thrust" : "gimbal") + "," +
                   std::to_string(i % K) + "," + fmt_double(ge[i]) + "," + fmt_double(gf[i]) + "," +
                   fmt_double(err) + "," +
                   (std::abs(gf[i]) > 0 ? fmt_double(err / std::abs(gf[i])) : std::string()) + "\n";
        }
        emit(out_dir, "gradient_check.csv", csv, r.files);
        json rep;
        rep["engine"] = engine_name(engine);
        rep["K"] = K;
        rep["seed"] = seed;
        rep["loss"] = r.loss;
        rep["passed"] = r.comparison.passed;
        rep["max_rel_error"] = r.comparison.max_rel_error;
        rep["max_abs_error"] = r.comparison.max_abs_error;
        rep["worst_index"] = r.comparison.worst_index;
        rep["worst_value"] = r.comparison.worst_value;
        rep["worst_reference"] = r.comparison.worst_reference;
        rep["corrupt_index"] = corrupt_index;
        emit(out_dir, "grad_check.json", rep.dump(2) + "\n", r.files);

        RunManifest m = base_manifest("check-grad", argv, &config);
        m.params["engine"] = engine_name(engine);
        m.params["seed"] = std::to_string(seed);
        m.params["corrupt_index"] = std::to_string(corrupt_index);
        write_manifest(m, out_dir, "manifest.json", r.files);
        r.files.push_back("manifest.json");
    }
    return r;
}

// ---- compare-engines --------------------------------------------------------------

EngineComparison run_compare_engines(const ScenarioConfig& config, GradientEngine a,
                                     GradientEngine b, const std::string& out_dir,
                                     const std::vector<std::string>& argv,
                                     const ProgressCallback& progress) {
    if (a == GradientEngine::finite_diff || b == GradientEngine::finite_diff)
        throw ConfigError("engine", "compare-engines takes bptt or adjoint");
    const NondimScenario scn = nondimensionalize(config);
    const AeroModel aero = make_aero(config);
    const int K = config.steps;
    const int slots = config.opt.checkpoint_slots;

    EngineComparison cmp;
    cmp.steps = K;
    cmp.a.engine = a;
    cmp.b.engine = b;

    std::string grad_csv = "point,index,a,b\n";
    const RawControls points[] = {initial_raw_controls(scn), random_raw_controls(K, config.seed)};
    for (int p = 0; p < 2; ++p) {
        const GradientReport ga = compute_gradient(a, points[p], scn, aero, slots);
        const GradientReport gb = compute_gradient(b, points[p], scn, aero, slots);
        cmp.a.gradient_seconds += ga.wall_seconds;
        cmp.b.gradient_seconds += gb.wall_seconds;
        cmp.a.peak_aux_bytes = std::max(cmp.a.peak_aux_bytes, ga.peak_aux_bytes);
        cmp.b.peak_aux_bytes = std::max(cmp.b.peak_aux_bytes, gb.peak_aux_bytes);
        const auto fa = flat(ga), fb = flat(gb);
        cmp.gradient_mae = std::max(cmp.gradient_mae, relative_mae(fa, fb));
        for (int i = 0; i < 2 * K; ++i)
            grad_csv += std::to_string(p) + "," + std::to_string(i) + "," + fmt_double(fa[i]) + "," +
                        fmt_double(fb[i]) + "\n";
    }

    auto run_side = [&](GradientEngine e, EngineSide& side) {
        OptimizerConfig oc = config.opt;
        oc.engine = e;
        const OptimizationResult res = optimize(scn, aero, oc, progress);
        side.loss = res.final_loss;
        side.residuals = terminal_residuals(res.trajectory, config);
        side.optimize_seconds = res.wall_seconds;
        return res;
    };
    const OptimizationResult ra = run_side(a, cmp.a);
    const OptimizationResult rb = run_side(b, cmp.b);

    const ControlSequence& ca = ra.trajectory.controls;
    const ControlSequence& cb = rb.trajectory.controls;
    cmp.controls_mae = std::max(relative_mae(ca.thrust, cb.thrust), relative_mae(ca.gimbal, cb.gimbal));
    for (int i = 0; i < kStateDim; ++i) {
        std::vector<double> xa, xb;
        for (const VehicleState& s : ra.trajectory.states) xa.push_back(s[i]);
        for (const VehicleState& s : rb.trajectory.states) xb.push_back(s[i]);
        const double e = relative_mae(xa, xb);
        if (!(e <= cmp.trajectory_mae)) {
            cmp.trajectory_mae = e;
            cmp.worst_trajectory_channel = kStateNames[i];
        }
    }
    cmp.passed = cmp.gradient_mae < cmp.tolerance && cmp.controls_mae < cmp.tolerance &&
                 cmp.trajectory_mae < cmp.tolerance;

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        emit(out_dir, "gradients.csv", grad_csv, cmp.files);
        emit(out_dir, "a_controls.csv", controls_csv(ca, config), cmp.files);
        emit(out_dir, "b_controls.csv", controls_csv(cb, config), cmp.files);
        emit(out_dir, "a_trajectory.csv", trajectory_csv(ra.trajectory, config), cmp.files);
        emit(out_dir, "b_trajectory.csv", trajectory_csv(rb.trajectory, config), cmp.files);
        emit(out_dir, "a_loss_history.csv", loss_history_csv(ra.history), cmp.files);
        emit(out_dir, "b_loss_history.csv", loss_history_csv(rb.history), cmp.files);
        auto side_json = [](const EngineSide& s) {
            json j;
            j["engine"] = engine_name(s.engine);
            j["loss"] = loss_json(s.loss);
            j["terminal"] = residuals_json(s.residuals);
            j["gradient_time_s"] = s.gradient_seconds;
            j["optimize_time_s"] = s.optimize_seconds;
            j["peak_aux_bytes"] = s.peak_aux_bytes;
            return j;
        };
        json rep;
        rep["K"] = K;
        rep["tolerance"] = cmp.tolerance;
        rep["gradient_mae"] = cmp.gradient_mae;
        rep["controls_mae"] = cmp.controls_mae;
        rep["trajectory_mae"] = cmp.trajectory_mae;
        rep["worst_trajectory_channel"] = cmp.worst_trajectory_channel;
        rep["passed"] = cmp.passed;
        rep["a"] = side_json(cmp.a);
        rep["b"] = side_json(cmp.b);
        emit(out_dir, "compare_engines.json", rep.dump(2) + "\n", cmp.files);

        RunManifest m = base_manifest("compare-engines", argv, &config);
        m.params["engine_a"] = engine_name(a);
        m.params["engine_b"] = engine_name(b);
        write_manifest(m, out_dir, "manifest.json", cmp.files);
        cmp.files.push_back("manifest.json");
    }
    return cmp;
}

// ---- replay ---------------------------------------------------------------------

ReplayReport run_replay(const std::string& manifest_path, const std::string& out_dir,
                        const std::vector<std::string>& argv) {
    const RunManifest m = manifest_from_json(read_file(manifest_path), manifest_path);
    if (out_dir.empty()) throw ConfigError("out", "replay needs an output directory");
    if (absolute(out_dir) == absolute(fs::path(manifest_path).parent_path().string()))
        throw ConfigError("out", "replay output must differ from the recorded run directory");

    for (const FileDigest& in : m.inputs) {
        const std::string actual = in.path.rfind("builtin:", 0) == 0
                                       ? hex64(fnv1a64(weights_to_json(load_weights(in.path))))
                                       : digest_of_file(in.path);
        if (actual != in.fnv1a)
            throw ConfigError("inputs", "'" + in.path + "' changed since the run (" + in.fnv1a +
                                            " recorded, " + actual + " now)");
    }

    ScenarioConfig config;
    if (!m.scenario_json.empty()) {
        config = scenario_from_json(m.scenario_json, manifest_path);
        config.seed = m.seed;
    }

    ReplayReport rep;
    rep.command = m.command;
    if (m.command == "optimize") {
        run_optimize(config, out_dir, argv);
    } else if (m.command == "simulate") {
        run_simulate(config, param(m, "controls"), param(m, "no_aero") == "1", out_dir, argv);
    } else if (m.command == "train-aero") {
        run_train_aero(std::stoi(param(m, "samples")), m.seed,
                       (fs::path(out_dir) / param(m, "out")).string(), argv);
    } else if (m.command == "check-grad") {
        run_check_grad(config, engine_from_name(param(m, "engine")),
                       std::stoull(param(m, "seed")), std::stoi(param(m, "corrupt_index")), out_dir,
                       argv);
    } else if (m.command == "compare-engines") {
        run_compare_engines(config, engine_from_name(param(m, "engine_a")),
                            engine_from_name(param(m, "engine_b")), out_dir, argv);
    } else {
        throw ConfigError("command", "cannot replay '" + m.command + "'");
    }

    rep.all_match = true;
    for (const FileDigest& out : m.outputs) {
        if (fs::path(out.path).extension() != ".csv") continue;
        ReplayCheck c;
        c.file = out.path;
        c.expected = out.fnv1a;
        const fs::path p = fs::path(out_dir) / out.path;
        c.actual = fs::exists(p) ? digest_of_file(p.string()) : "missing";
        c.match = c.actual == c.expected;
        rep.all_match = rep.all_match && c.match;
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace flipopt
