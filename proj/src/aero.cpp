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

#include "flipopt/aero.hpp"

#include <cmath>
#include <random>

#include "flipopt/error.hpp"
#include "flipopt/optimizer.hpp"

namespace flipopt {

void MlpSurrogate::validate() const {
    if (layers.empty()) throw ConfigError("layers", "surrogate has no layers");
    if (layers.front().cols != 2) throw ConfigError("layers[0].cols", "input width must be 2");
    if (layers.back().rows != 3) throw ConfigError("layers[-1].rows", "output width must be 3");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        const std::string tag = "layers[" + std::to_string(l) + "]";
        if (L.rows <= 0 || L.cols <= 0) throw ConfigError(tag, "empty layer");
        if (L.w.size() != static_cast<std::size_t>(L.rows) * L.cols)
            throw ConfigError(tag + ".w", "size does not match rows*cols");
        if (L.b.size() != static_cast<std::size_t>(L.rows))
            throw ConfigError(tag + ".b", "size does not match rows");
        if (l > 0 && L.cols != layers[l - 1].rows)
            throw ConfigError(tag + ".cols", "does not match previous layer rows");
        for (double x : L.w)
            if (!std::isfinite(x)) throw ConfigError(tag + ".w", "non-finite weight");
        for (double x : L.b)
            if (!std::isfinite(x)) throw ConfigError(tag + ".b", "non-finite bias");
    }
}

Coefficients standin_coeffs(double alpha) {
    const double a = wrap_two_pi(alpha);
    const double s = std::sin(a);
    const double c = std::cos(a);
    const double normal = 2.2 * s * std::abs(s);
    const double axial = 0.15 * c * std::abs(c);
    const double lift = normal * c - axial * s;
    const double drag = normal * s + axial * c + 0.05;
    // Centre of pressure at 0.55 L ahead of the cg at 0.60 L.
    const double moment = -(0.55 - 0.60) * normal;
    return {lift, drag, moment};
}

std::vector<CoeffSample> generate_dataset(int n_samples) {
    if (n_samples < 4) throw ConfigError("samples", "need at least 4 samples");
    std::vector<CoeffSample> out;
    out.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double alpha = 2.0 * kPi * i / n_samples;
        // The stand-in is written for incidence (body angle minus flow angle), the
        // negative of the flow-relative angle used by the dynamics.
        const Coefficients c = standin_coeffs(-alpha);
        out.push_back({alpha, c[0], c[1], c[2]});
    }
    return out;
}

std::array<double, 2> mlp_input_vjp(const MlpSurrogate& model, double sin_a, double cos_a,
                                    const Coefficients& g) {
    const std::size_t n_layers = model.layers.size();
    // Forward pass keeping post-activation values of every layer.
    std::vector<std::vector<double>> acts(n_layers + 1);
    acts[0] = {sin_a, cos_a};
    for (std::size_t l = 0; l < n_layers; ++l) {
        const DenseLayer& L = model.layers[l];
        auto& out = acts[l + 1];
        out.assign(L.rows, 0.0);
        for (int r = 0; r < L.rows; ++r) {
            double acc = L.b[r];
            const double* row = &L.w[static_cast<std::size_t>(r) * L.cols];
            for (int c = 0; c < L.cols; ++c) acc += acts[l][c] * row[c];
            out[r] = l + 1 < n_layers ? std::tanh(acc) : acc;
        }
    }
    std::vector<double> delta(g.begin(), g.end());
    for (std::size_t l = n_layers; l-- > 0;) {
        const DenseLayer& L = model.layers[l];
        if (l + 1 < n_layers) {
            for (int r = 0; r < L.rows; ++r) {
                const double t = acts[l + 1][r];
                delta[r] *= 1.0 - t * t;
            }
        }
        std::vector<double> prev(L.cols, 0.0);
        for (int r = 0; r < L.rows; ++r) {
            const double* row = &L.w[static_cast<std::size_t>(r) * L.cols];
            for (int c = 0; c < L.cols; ++c) prev[c] += row[c] * delta[r];
        }
        delta.swap(prev);
    }
    return {delta[0], delta[1]};
}

namespace {

/// Uniform in [-a, a) from the top 53 bits; identical across standard libraries.
double uniform_symmetric(std::mt19937_64& rng, double a) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * a;
}

std::size_t parameter_count(const MlpSurrogate& m) {
    std::size_t n = 0;
    for (const auto& L : m.layers) n += L.w.size() + L.b.size();
    return n;
}

void scatter(const std::vector<double>& flat, MlpSurrogate& m) {
    std::size_t i = 0;
    for (auto& L : m.layers) {
        for (double& w : L.w) w = flat[i++];
        for (double& b : L.b) b = flat[i++];
    }
}

std::vector<double> gather(const MlpSurrogate& m) {
    std::vector<double> flat;
    flat.reserve(parameter_count(m));
    for (const auto& L : m.layers) {
        flat.insert(flat.end(), L.w.begin(), L.w.end());
        flat.insert(flat.end(), L.b.begin(), L.b.end());
    }
    return flat;
}

// Batch loss and gradient with respect to every weight and bias (flat layout as gather()).
double loss_and_gradient(const MlpSurrogate& model, const std::vector<CoeffSample>& data,
                         std::vector<double>& grad) {
    const std::size_t n_layers = model.layers.size();
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<std::size_t> offset(n_layers);
    {
        std::size_t o = 0;
        for (std::size_t l = 0; l < n_layers; ++l) {
            offset[l] = o;
            o += model.layers[l].w.size() + model.layers[l].b.size();
        }
    }
    const double norm = 1.0 / (3.0 * static_cast<double>(data.size()));
    double total = 0.0;
    std::vector<std::vector<double>> acts(n_layers + 1);
    for (const CoeffSample& s : data) {
        const double a = wrap_two_pi(s.alpha);
        acts[0] = {std::sin(a), std::cos(a)};
        for (std::size_t l = 0; l < n_layers; ++l) {
            const DenseLayer& L = model.layers[l];
            auto& out = acts[l + 1];
            out.assign(L.rows, 0.0);
            for (int r = 0; r < L.rows; ++r) {
                double acc = L.b[r];
                const double* row = &L.w[static_cast<std::size_t>(r) * L.cols];
                for (int c = 0; c < L.cols; ++c) acc += acts[l][c] * row[c];
                out[r] = l + 1 < n_layers ? std::tanh(acc) : acc;
            }
        }
        const double target[3] = {s.lift, s.drag, s.moment};
        std::vector<double> delta(3);
        for (int j = 0; j < 3; ++j) {
            const double e = acts[n_layers][j] - target[j];
            total += e * e;
            delta[j] = 2.0 * e * norm;
        }
        for (std::size_t l = n_layers; l-- > 0;) {
            const DenseLayer& L = model.layers[l];
            if (l + 1 < n_layers) {
                for (int r = 0; r < L.rows; ++r) {
                    const double t = acts[l + 1][r];
                    delta[r] *= 1.0 - t * t;
                }
            }
            double* gw = &grad[offset[l]];
            double* gb = gw + L.w.size();
            std::vector<double> prev(L.cols, 0.0);
            for (int r = 0; r < L.rows; ++r) {
                const double* row = &L.w[static_cast<std::size_t>(r) * L.cols];
                for (int c = 0; c < L.cols; ++c) {
                    gw[static_cast<std::size_t>(r) * L.cols + c] += delta[r] * acts[l][c];
                    prev[c] += row[c] * delta[r];
                }
                gb[r] += delta[r];
            }
            delta.swap(prev);
        }
    }
    return total * norm;
}

}  // namespace

double surrogate_mse(const MlpSurrogate& model, const std::vector<CoeffSample>& dataset) {
    double total = 0.0;
    for (const CoeffSample& s : dataset) {
        const auto y = mlp_forward(model, s.alpha);
        const double e[3] = {y[0] - s.lift, y[1] - s.drag, y[2] - s.moment};
        total += e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    }
    return total / (3.0 * static_cast<double>(dataset.size()));
}

MlpSurrogate train_surrogate(const std::vector<CoeffSample>& dataset, const TrainerConfig& hyper,
                             std::uint64_t seed) {
    if (dataset.empty()) throw ConfigError("dataset", "must not be empty");
    if (hyper.epochs < 0) throw ConfigError("epochs", "must be >= 0");

    MlpSurrogate model;
    std::mt19937_64 rng(seed);
    int fan_in = 2;
    std::vector<int> widths = hyper.hidden;
    widths.push_back(3);
    for (int fan_out : widths) {
        DenseLayer L;
        L.rows = fan_out;
        L.cols = fan_in;
        L.w.resize(static_cast<std::size_t>(fan_out) * fan_in);
        L.b.assign(fan_out, 0.0);
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& w : L.w) w = uniform_symmetric(rng, limit);
        model.layers.push_back(std::move(L));
        fan_in = fan_out;
    }

    std::vector<double> params = gather(model);
    std::vector<double> grad(params.size());
    AdamState state(params.size());
    const AdamHyper adam{hyper.beta1, hyper.beta2, hyper.eps};
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        const double loss = loss_and_gradient(model, dataset, grad);
        if (!std::isfinite(loss))
            throw NumericalError("surrogate training diverged", epoch, "loss");
        adam_step(params, grad, state, hyper.learning_rate, adam);
        scatter(params, model);
    }
    model.meta.train_loss = surrogate_mse(model, dataset);
    if (!std::isfinite(model.meta.train_loss))
        throw NumericalError("surrogate training diverged", hyper.epochs, "loss");
    model.meta.samples = static_cast<int>(dataset.size());
    model.meta.seed = seed;
    model.meta.epochs = hyper.epochs;
    return model;
}

namespace {

VehicleState simplified_vjp(const VehicleState& s, const SimplifiedAero& model,
                            const NondimScenario& scn, const AeroForces& g) {
    VehicleState out;
    const double u = s.u();
    const double v = s.v();
    const double speed2 = u * u + v * v;
    if (speed2 < kStillAir * kStillAir) return out;
    const double sp = std::sqrt(speed2);
    const double k = 0.5 * scn.density * model.drag_coeff * scn.ref_area;
    const double st = std::sin(s.theta());
    const double ct = std::cos(s.theta());
    const double cross = -u * st + v * ct;
    const double arm = model.cp_frac - scn.cg;

    const double dfx_du = -k * (sp + u * u / sp);
    const double dfx_dv = -k * u * v / sp;
    const double dfy_du = dfx_dv;
    const double dfy_dv = -k * (sp + v * v / sp);
    const double dm_du = arm * k * (u / sp * cross - sp * st);
    const double dm_dv = arm * k * (v / sp * cross + sp * ct);
    const double dm_dtheta = arm * k * sp * (-u * ct - v * st);

    out.u() = g.fx * dfx_du + g.fy * dfy_du + g.moment * dm_du;
    out.v() = g.fx * dfx_dv + g.fy * dfy_dv + g.moment * dm_dv;
    out.theta() = g.moment * dm_dtheta;
    return out;
}

VehicleState surrogate_vjp(const VehicleState& s, const MlpSurrogate& model,
                           const NondimScenario& scn, const AeroForces& g) {
    VehicleState out;
    const double u = s.u();
    const double v = s.v();
    const double speed2 = u * u + v * v;
    if (speed2 < kStillAir * kStillAir) return out;
    const double sp = std::sqrt(speed2);
    const double alpha = angle_of_attack(s);
    const double sa = std::sin(alpha);
    const double ca = std::cos(alpha);
    const auto coeff = mlp_eval(model, sa, ca);
    const double cl = coeff[0];
    const double cd = coeff[1];
    const double cm = coeff[2];
    const double c = 0.5 * scn.density * scn.ref_area;

    // F_x = c*(-cd*s*u - cl*s*v), F_y = c*(-cd*s*v + cl*s*u), M = c*s^2*cm
    const double g_cl = c * sp * (-v * g.fx + u * g.fy);
    const double g_cd = c * sp * (-u * g.fx - v * g.fy);
    const double g_cm = c * speed2 * g.moment;
    const auto g_in = mlp_input_vjp(model, sa, ca, {g_cl, g_cd, g_cm});
    const double g_alpha = g_in[0] * ca - g_in[1] * sa;

    const double dfx_du = c * (-cd * (sp + u * u / sp) - cl * v * u / sp);
    const double dfx_dv = c * (-cd * u * v / sp - cl * (sp + v * v / sp));
    const double dfy_du = c * (-cd * v * u / sp + cl * (sp + u * u / sp));
    const double dfy_dv = c * (-cd * (sp + v * v / sp) + cl * u * v / sp);
    const double dm_du = 2.0 * c * u * cm;
    const double dm_dv = 2.0 * c * v * cm;

    out.u() = g.fx * dfx_du + g.fy * dfy_du + g.moment * dm_du - g_alpha * v / speed2;
    out.v() = g.fx * dfx_dv + g.fy * dfy_dv + g.moment * dm_dv + g_alpha * u / speed2;
    out.theta() = -g_alpha;
    return out;
}

}  // namespace

VehicleState aero_vjp(const VehicleState& s, const AeroModel& model, const NondimScenario& scn,
                      const AeroForces& g) {
    if (const auto* simp = std::get_if<SimplifiedAero>(&model)) return simplified_vjp(s, *simp, scn, g);
    if (const auto* mlp = std::get_if<MlpSurrogate>(&model)) return surrogate_vjp(s, *mlp, scn, g);
    return {};
}

std::string aero_kind_name(const AeroModel& model) {
    if (std::holds_alternative<SimplifiedAero>(model)) return "simplified";
    if (std::holds_alternative<MlpSurrogate>(model)) return "surrogate";
    return "none";
}

}  // namespace flipopt
