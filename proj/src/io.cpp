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

#include "flipopt/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "embedded_data.hpp"
#include "flipopt/error.hpp"
#include "flipopt/gradients.hpp"

namespace flipopt {

using nlohmann::json;

namespace {

// ---- JSON field access with path-qualified diagnostics --------------------

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool ok = std::any_of(known.begin(), known.end(),
                                    [&](const char* k) { return it.key() == k; });
        if (!ok) throw ConfigError(join(prefix, it.key()), "unknown field");
    }
}

const json* section(const json& obj, const char* key, const std::string& prefix) {
    auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (!it->is_object()) throw ConfigError(join(prefix, key), "expected an object");
    return &*it;
}

void get(const json& obj, const char* key, const std::string& prefix, double& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) throw ConfigError(join(prefix, key), "expected a number");
    out = it->get<double>();
}

void get(const json& obj, const char* key, const std::string& prefix, int& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer()) throw ConfigError(join(prefix, key), "expected an integer");
    const auto v = it->get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(join(prefix, key), "integer out of range");
    out = static_cast<int>(v);
}

void get(const json& obj, const char* key, const std::string& prefix, std::uint64_t& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_number_unsigned()) {
        out = it->get<std::uint64_t>();
    } else if (it->is_number_integer() && it->get<long long>() >= 0) {
        out = static_cast<std::uint64_t>(it->get<long long>());
    } else {
        throw ConfigError(join(prefix, key), "expected a non-negative integer");
    }
}

void get(const json& obj, const char* key, const std::string& prefix, std::string& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string()) throw ConfigError(join(prefix, key), "expected a string");
    out = it->get<std::string>();
}

void get(const json& obj, const char* key, const std::string& prefix, Vec2& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw ConfigError(join(prefix, key), "expected [x, y]");
    out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

json vec(const Vec2& v) { return json::array({v[0], v[1]}); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        // Drop the library's "[json.exception.parse_error.101] " prefix.
        if (auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
        throw ConfigError("", source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                  ": " + msg);
    }
}

const char* aero_kind_key(AeroKind k) {
    switch (k) {
        case AeroKind::simplified: return "simplified";
        case AeroKind::surrogate: return "surrogate";
        case AeroKind::none: return "none";
    }
    return "simplified";
}

AeroKind parse_aero_kind(const std::string& s) {
    if (s == "simplified") return AeroKind::simplified;
    if (s == "surrogate") return AeroKind::surrogate;
    if (s == "none") return AeroKind::none;
    throw ConfigError("aero.kind", "expected simplified, surrogate or none, got '" + s + "'");
}

GradientEngine parse_engine(const std::string& s) {
    if (s == "bptt") return GradientEngine::bptt;
    if (s == "adjoint") return GradientEngine::adjoint;
    throw ConfigError("opt.grad_engine", "expected bptt or adjoint, got '" + s + "'");
}

void apply(const json& doc, ScenarioConfig& c, const std::string& base_dir) {
    if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
    reject_unknown(doc, "", {"name", "preset", "refs", "vehicle", "bc", "K", "t_f_s", "dt_s",
                             "aero", "loss_weights", "opt", "seed"});
    get(doc, "name", "", c.name);

    if (const json* r = section(doc, "refs", "")) {
        reject_unknown(*r, "refs", {"L_ref_m", "v_ref_mps", "m_ref_kg", "rho_kgpm3", "g0_mps2"});
        get(*r, "L_ref_m", "refs", c.refs.length_m);
        get(*r, "v_ref_mps", "refs", c.refs.speed_mps);
        get(*r, "m_ref_kg", "refs", c.refs.mass_kg);
        get(*r, "rho_kgpm3", "refs", c.refs.density_kgpm3);
        get(*r, "g0_mps2", "refs", c.refs.gravity_mps2);
    }
    if (const json* v = section(doc, "vehicle", "")) {
        const std::string p = "vehicle";
        reject_unknown(*v, p, {"J_z_kgm2", "I_sp_s", "m_wet_kg", "m_dry_kg", "l_cg_frac",
                               "T_max_N", "throttle_min_frac", "delta_max_deg", "T_d_s",
                               "eps_corr", "eta_corr", "S_ref_m2"});
        auto& vp = c.vehicle;
        get(*v, "J_z_kgm2", p, vp.inertia_kgm2);
        get(*v, "I_sp_s", p, vp.isp_s);
        get(*v, "m_wet_kg", p, vp.wet_mass_kg);
        get(*v, "m_dry_kg", p, vp.dry_mass_kg);
        get(*v, "l_cg_frac", p, vp.cg_frac);
        get(*v, "T_max_N", p, vp.max_thrust_N);
        get(*v, "throttle_min_frac", p, vp.min_throttle_frac);
        get(*v, "delta_max_deg", p, vp.max_gimbal_deg);
        get(*v, "T_d_s", p, vp.actuator_lag_s);
        get(*v, "eps_corr", p, vp.force_correction);
        get(*v, "eta_corr", p, vp.moment_correction);
        get(*v, "S_ref_m2", p, vp.ref_area_m2);
    }
    if (const json* b = section(doc, "bc", "")) {
        const std::string p = "bc";
        reject_unknown(*b, p, {"r0_m", "v0_mps", "a0_mps2", "theta0_deg", "omega0_radps", "rf_m",
                               "vf_mps", "thetaf_deg", "omegaf_radps", "t_flip_max_s"});
        auto& bc = c.bc;
        get(*b, "r0_m", p, bc.r0_m);
        get(*b, "v0_mps", p, bc.v0_mps);
        get(*b, "a0_mps2", p, bc.a0_mps2);
        get(*b, "theta0_deg", p, bc.theta0_deg);
        get(*b, "omega0_radps", p, bc.omega0_radps);
        get(*b, "rf_m", p, bc.rf_m);
        get(*b, "vf_mps", p, bc.vf_mps);
        get(*b, "thetaf_deg", p, bc.thetaf_deg);
        get(*b, "omegaf_radps", p, bc.omegaf_radps);
        get(*b, "t_flip_max_s", p, bc.flip_deadline_s);
    }

    // The horizon is stored as t_f; dt wins when both are present so that a
    // written snapshot reloads bit-identically.
    const double old_tf = c.horizon_s();
    get(doc, "K", "", c.steps);
    if (c.steps < 1) throw ConfigError("K", "must be >= 1");
    double tf = old_tf;
    get(doc, "t_f_s", "", tf);
    if (!(std::isfinite(tf) && tf > 0)) throw ConfigError("t_f_s", "must be > 0");
    if (doc.contains("dt_s")) {
        get(doc, "dt_s", "", c.dt_s);
        if (doc.contains("t_f_s") && std::abs(c.dt_s * c.steps - tf) > 1e-12 * tf)
            throw ConfigError("dt_s", "inconsistent with t_f_s / K");
    } else if (doc.contains("t_f_s") || doc.contains("K")) {
        c.dt_s = tf / c.steps;
    }

    if (const json* a = section(doc, "aero", "")) {
        reject_unknown(*a, "aero", {"kind", "C_D", "l_cp_frac", "weights_path"});
        std::string kind = aero_kind_key(c.aero.kind);
        get(*a, "kind", "aero", kind);
        c.aero.kind = parse_aero_kind(kind);
        get(*a, "C_D", "aero", c.aero.drag_coeff);
        get(*a, "l_cp_frac", "aero", c.aero.cp_frac);
        if (a->contains("weights_path")) {
            get(*a, "weights_path", "aero", c.aero.weights_path);
            const std::string& w = c.aero.weights_path;
            if (!base_dir.empty() && !w.empty() && w.rfind("builtin:", 0) != 0 &&
                std::filesystem::path(w).is_relative())
                c.aero.weights_path = (std::filesystem::path(base_dir) / w).lexically_normal().string();
        }
    }
    if (const json* w = section(doc, "loss_weights", "")) {
        const std::string p = "loss_weights";
        reject_unknown(*w, p, {"w_r", "w_v", "w_theta", "w_omega", "w_smooth", "w_mass", "w_flip"});
        auto& lw = c.loss_weights;
        get(*w, "w_r", p, lw.position);
        get(*w, "w_v", p, lw.velocity);
        get(*w, "w_theta", p, lw.pitch);
        get(*w, "w_omega", p, lw.omega);
        get(*w, "w_smooth", p, lw.smooth);
        get(*w, "w_mass", p, lw.mass);
        get(*w, "w_flip", p, lw.flip);
    }
    if (const json* o = section(doc, "opt", "")) {
        const std::string p = "opt";
        reject_unknown(*o, p, {"beta1", "beta2", "eps", "lr_max", "lr_min", "n_steps",
                               "grad_engine", "log_every", "clip_grad_inf", "checkpoint_slots"});
        auto& oc = c.opt;
        get(*o, "beta1", p, oc.beta1);
        get(*o, "beta2", p, oc.beta2);
        get(*o, "eps", p, oc.eps);
        get(*o, "lr_max", p, oc.lr_max);
        get(*o, "lr_min", p, oc.lr_min);
        get(*o, "n_steps", p, oc.n_steps);
        std::string engine = engine_name(oc.engine);
        get(*o, "grad_engine", p, engine);
        oc.engine = parse_engine(engine);
        get(*o, "log_every", p, oc.log_every);
        get(*o, "clip_grad_inf", p, oc.clip_grad_inf);
        get(*o, "checkpoint_slots", p, oc.checkpoint_slots);
    }
    get(doc, "seed", "", c.seed);
}

}  // namespace

std::vector<std::string> preset_names() { return {"case1", "case2"}; }

const std::string& preset_json(const std::string& name) {
    static const std::string case1 = embedded::kCase1Json;
    static const std::string case2 = embedded::kCase2Json;
    if (name == "case1") return case1;
    if (name == "case2") return case2;
    throw ConfigError("scenario", "unknown preset '" + name + "' (valid presets: case1, case2)");
}

namespace {

ScenarioConfig parse_preset(const std::string& name) {
    ScenarioConfig c;
    json doc = parse_json(preset_json(name), "preset:" + name);
    doc.erase("preset");
    apply(doc, c, "");
    validate(c);
    return c;
}

}  // namespace

ScenarioConfig preset_case1() { return parse_preset("case1"); }
ScenarioConfig preset_case2() { return parse_preset("case2"); }

ScenarioConfig scenario_from_json(const std::string& text, const std::string& source,
                                  const std::string& base_dir) {
    const json doc = parse_json(text, source);
    if (!doc.is_object()) throw ConfigError("", source + ": scenario must be a JSON object");
    std::string base = "case1";
    get(doc, "preset", "", base);
    ScenarioConfig c = parse_preset(base);
    apply(doc, c, base_dir);
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::string& path_or_preset) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), path_or_preset) != names.end())
        return parse_preset(path_or_preset);
    namespace fs = std::filesystem;
    if (!fs::exists(path_or_preset))
        throw ConfigError("scenario", "no such file or preset '" + path_or_preset +
                                          "' (valid presets: case1, case2)");
    const std::string text = read_file(path_or_preset);
    const std::string dir = fs::path(path_or_preset).parent_path().string();
    return scenario_from_json(text, path_or_preset, dir.empty() ? "." : dir);
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json doc = json::object();
    doc["name"] = c.name;
    doc["refs"] = {{"L_ref_m", c.refs.length_m},
                   {"v_ref_mps", c.refs.speed_mps},
                   {"m_ref_kg", c.refs.mass_kg},
                   {"rho_kgpm3", c.refs.density_kgpm3},
                   {"g0_mps2", c.refs.gravity_mps2}};
    const auto& v = c.vehicle;
    doc["vehicle"] = {{"J_z_kgm2", v.inertia_kgm2},
                      {"I_sp_s", v.isp_s},
                      {"m_wet_kg", v.wet_mass_kg},
                      {"m_dry_kg", v.dry_mass_kg},
                      {"l_cg_frac", v.cg_frac},
                      {"T_max_N", v.max_thrust_N},
                      {"throttle_min_frac", v.min_throttle_frac},
                      {"delta_max_deg", v.max_gimbal_deg},
                      {"T_d_s", v.actuator_lag_s},
                      {"eps_corr", v.force_correction},
                      {"eta_corr", v.moment_correction},
                      {"S_ref_m2", v.ref_area_m2}};
    const auto& bc = c.bc;
    doc["bc"] = {{"r0_m", vec(bc.r0_m)},
                 {"v0_mps", vec(bc.v0_mps)},
                 {"a0_mps2", vec(bc.a0_mps2)},
                 {"theta0_deg", bc.theta0_deg},
                 {"omega0_radps", bc.omega0_radps},
                 {"rf_m", vec(bc.rf_m)},
                 {"vf_mps", vec(bc.vf_mps)},
                 {"thetaf_deg", bc.thetaf_deg},
                 {"omegaf_radps", bc.omegaf_radps},
                 {"t_flip_max_s", bc.flip_deadline_s}};
    doc["K"] = c.steps;
    doc["t_f_s"] = c.horizon_s();
    doc["dt_s"] = c.dt_s;
    json aero = {{"kind", aero_kind_key(c.aero.kind)}};
    if (c.aero.kind == AeroKind::simplified) {
        aero["C_D"] = c.aero.drag_coeff;
        aero["l_cp_frac"] = c.aero.cp_frac;
    }
    if (!c.aero.weights_path.empty()) aero["weights_path"] = c.aero.weights_path;
    doc["aero"] = aero;
    const auto& w = c.loss_weights;
    doc["loss_weights"] = {{"w_r", w.position},      {"w_v", w.velocity},   {"w_theta", w.pitch},
                           {"w_omega", w.omega},     {"w_smooth", w.smooth}, {"w_mass", w.mass},
                           {"w_flip", w.flip}};
    const auto& o = c.opt;
    doc["opt"] = {{"beta1", o.beta1},
                  {"beta2", o.beta2},
                  {"eps", o.eps},
                  {"lr_max", o.lr_max},
                  {"lr_min", o.lr_min},
                  {"n_steps", o.n_steps},
                  {"grad_engine", engine_name(o.engine)},
                  {"log_every", o.log_every},
                  {"clip_grad_inf", o.clip_grad_inf},
                  {"checkpoint_slots", o.checkpoint_slots}};
    doc["seed"] = c.seed;
    return doc.dump(2) + "\n";
}

AeroModel make_aero(const ScenarioConfig& c) {
    switch (c.aero.kind) {
        case AeroKind::simplified: return SimplifiedAero{c.aero.drag_coeff, c.aero.cp_frac};
        case AeroKind::surrogate: return load_weights(c.aero.weights_path);
        case AeroKind::none: return NoAero{};
    }
    return NoAero{};
}

// ---- weights ----------------------------------------------------------------

std::string weights_to_json(const MlpSurrogate& m) {
    json layers = json::array();
    for (const DenseLayer& L : m.layers)
        layers.push_back({{"rows", L.rows}, {"cols", L.cols}, {"w", L.w}, {"b", L.b}});
    json doc = {{"layers", layers},
                {"activation", "tanh"},
                {"meta",
                 {{"train_loss", m.meta.train_loss},
                  {"samples", m.meta.samples},
                  {"seed", m.meta.seed},
                  {"epochs", m.meta.epochs},
                  {"inputs", json::array({"sin_alpha", "cos_alpha"})},
                  {"outputs", json::array({"C_L", "C_D", "C_M"})}}}};
    return doc.dump(1) + "\n";
}

MlpSurrogate weights_from_json(const std::string& text, const std::string& source) {
    const json doc = parse_json(text, source);
    if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array())
        throw ConfigError("layers", source + ": expected an array of layers");
    if (doc.contains("activation") && doc["activation"] != "tanh")
        throw ConfigError("activation", source + ": only tanh is supported");
    MlpSurrogate m;
    int i = 0;
    for (const json& l : doc["layers"]) {
        const std::string p = "layers[" + std::to_string(i++) + "]";
        if (!l.is_object()) throw ConfigError(p, "expected an object");
        DenseLayer L;
        get(l, "rows", p, L.rows);
        get(l, "cols", p, L.cols);
        if (!l.contains("w") || !l["w"].is_array()) throw ConfigError(p + ".w", "expected an array");
        if (!l.contains("b") || !l["b"].is_array()) throw ConfigError(p + ".b", "expected an array");
        for (const json& x : l["w"]) {
            if (!x.is_number()) throw ConfigError(p + ".w", "expected numbers");
            L.w.push_back(x.get<double>());
        }
        for (const json& x : l["b"]) {
            if (!x.is_number()) throw ConfigError(p + ".b", "expected numbers");
            L.b.push_back(x.get<double>());
        }
        m.layers.push_back(std::move(L));
    }
    if (const json* meta = section(doc, "meta", "")) {
        get(*meta, "train_loss", "meta", m.meta.train_loss);
        get(*meta, "samples", "meta", m.meta.samples);
        get(*meta, "seed", "meta", m.meta.seed);
        get(*meta, "epochs", "meta", m.meta.epochs);
    }
    m.validate();
    return m;
}

MlpSurrogate load_weights(const std::string& path) {
    if (path.rfind("builtin:", 0) == 0) {
        const std::string name = path.substr(8);
        if (name == "case2") return weights_from_json(embedded::kCase2WeightsJson, path);
        throw ConfigError("aero.weights_path", "unknown builtin weights '" + name + "'");
    }
    if (!std::filesystem::exists(path))
        throw ConfigError("aero.weights_path", "no such file '" + path + "'");
    return weights_from_json(read_file(path), path);
}

std::string dataset_csv(const std::vector<CoeffSample>& samples) {
    std::string out = "alpha_deg,CL,CD,CM\n";
    for (const CoeffSample& s : samples)
        out += fmt_double(s.alpha * kRadToDeg) + "," + fmt_double(s.lift) + "," +
               fmt_double(s.drag) + "," + fmt_double(s.moment) + "\n";
    return out;
}

// ---- artefacts --------------------------------------------------------------

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj, const ScenarioConfig& c) {
    const ReferenceQuantities& r = c.refs;
    const double force = r.force_N();
    std::string out =
        "k,t_s,x_m,y_m,theta_deg,u_mps,v_mps,omega_radps,mass_kg,delta_d_deg,alpha_deg,thrust_N,"
        "delta_cmd_deg\n";
    const int K = traj.steps();
    for (int k = 0; k <= K; ++k) {
        const VehicleState& s = traj.states[k];
        const SiState si = redimensionalize(s, r);
        const double alpha = k < K ? traj.alpha_log[k] : angle_of_attack(s);
        std::string row = std::to_string(k) + "," + fmt_double(k * c.dt_s) + "," +
                          fmt_double(si.x_m) + "," + fmt_double(si.y_m) + "," +
                          fmt_double(si.theta_rad * kRadToDeg) + "," + fmt_double(si.u_mps) + "," +
                          fmt_double(si.v_mps) + "," + fmt_double(si.omega_radps) + "," +
                          fmt_double(si.mass_kg) + "," + fmt_double(si.delta_d_rad * kRadToDeg) +
                          "," + fmt_double(alpha * kRadToDeg) + ",";
        // The final state has no command applied after it.
        if (k < K)
            row += fmt_double(traj.controls.thrust[k] * force) + "," +
                   fmt_double(traj.controls.gimbal[k] * kRadToDeg);
        else
            row += ",";
        out += row + "\n";
    }
    return out;
}

std::string controls_csv(const ControlSequence& controls, const ScenarioConfig& c) {
    const double force = c.refs.force_N();
    std::string out = "k,t_s,thrust_N,delta_deg\n";
    for (int k = 0; k < controls.steps(); ++k)
        out += std::to_string(k) + "," + fmt_double(k * c.dt_s) + "," +
               fmt_double(controls.thrust[k] * force) + "," +
               fmt_double(controls.gimbal[k] * kRadToDeg) + "\n";
    return out;
}

std::string loss_history_csv(const std::vector<LossRecord>& history) {
    std::string out = "step,lr,total";
    for (const char* name : kLossTermNames) out += std::string(",") + name;
    out += "\n";
    for (const LossRecord& r : history) {
        out += std::to_string(r.step) + "," + fmt_double(r.lr) + "," + fmt_double(r.loss.total);
        for (double t : r.loss.terms) out += "," + fmt_double(t);
        out += "\n";
    }
    return out;
}

const std::vector<double>* CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return &columns[i];
    return nullptr;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = cells;
            t.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError("", source + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(t.header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string& cell = cells[i];
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!cell.empty()) {
                char* end = nullptr;
                errno = 0;
                v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0')
                    throw ConfigError(t.header[i], source + ":" + std::to_string(line_no) +
                                                       ": not a number: '" + cell + "'");
            }
            t.columns[i].push_back(v);
        }
    }
    if (t.header.empty()) throw ConfigError("", source + ": empty CSV");
    return t;
}

ControlSequence parse_controls_csv(const std::string& text, const ScenarioConfig& c,
                                   int expected_steps) {
    const CsvTable t = parse_csv(text, "controls");
    const auto* thrust = t.column("thrust_N");
    const auto* delta = t.column("delta_deg");
    if (!thrust || !delta) throw ConfigError("controls", "missing thrust_N or delta_deg column");
    if (t.rows() != expected_steps)
        throw ConfigError("controls", "expected " + std::to_string(expected_steps) +
                                          " rows (K), got " + std::to_string(t.rows()));
    const double force = c.refs.force_N();
    ControlSequence seq;
    seq.thrust.resize(t.rows());
    seq.gimbal.resize(t.rows());
    for (int k = 0; k < t.rows(); ++k) {
        if (!std::isfinite((*thrust)[k]) || !std::isfinite((*delta)[k]))
            throw ConfigError("controls[" + std::to_string(k) + "]", "non-finite value");
        seq.thrust[k] = (*thrust)[k] / force;
        seq.gimbal[k] = (*delta)[k] * kDegToRad;
    }
    check_bounds(seq, nondimensionalize(c));
    return seq;
}

TerminalResiduals terminal_residuals(const Trajectory& traj, const ScenarioConfig& c) {
    TerminalResiduals out;
    const SiState end = redimensionalize(traj.states.back(), c.refs);
    const auto& bc = c.bc;
    out.position_error_m = std::hypot(end.x_m - bc.rf_m[0], end.y_m - bc.rf_m[1]);
    out.velocity_error_mps = std::hypot(end.u_mps - bc.vf_mps[0], end.v_mps - bc.vf_mps[1]);
    out.speed_error_mps =
        std::abs(std::hypot(end.u_mps, end.v_mps) - std::hypot(bc.vf_mps[0], bc.vf_mps[1]));
    out.pitch_error_deg = end.theta_rad * kRadToDeg - bc.thetaf_deg;
    out.omega_radps = end.omega_radps;
    out.min_mass_kg = std::numeric_limits<double>::infinity();
    double peak = -1.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const SiState s = redimensionalize(traj.states[k], c.refs);
        out.min_mass_kg = std::min(out.min_mass_kg, s.mass_kg);
        if (std::abs(s.omega_radps) > peak) {
            peak = std::abs(s.omega_radps);
            out.flip_y_over_L = s.y_m / c.refs.length_m;
            out.flip_time_s = static_cast<double>(k) * c.dt_s;
        }
    }
    return out;
}

// ---- files --------------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace flipopt
