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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flipopt/dynamics.hpp"

namespace flipopt {

/// Drag-only model with a fixed centre of pressure.
struct SimplifiedAero {
    double drag_coeff = 1.0;
    double cp_frac = 0.55;  ///< from nose tip, fraction of reference length
};

/// Fully connected layer, y = W x + b with W stored row-major (rows = outputs).
struct DenseLayer {
    int rows = 0;
    int cols = 0;
    std::vector<double> w;
    std::vector<double> b;
};

struct SurrogateMeta {
    double train_loss = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
    int epochs = 0;
};

/// MLP mapping (sin a, cos a) -> (C_L, C_D, C_M). tanh hidden layers, linear output.
struct MlpSurrogate {
    std::vector<DenseLayer> layers;
    SurrogateMeta meta;

    /// Throws ConfigError if shapes or values are invalid.
    void validate() const;
};

struct NoAero {};

using AeroModel = std::variant<SimplifiedAero, MlpSurrogate, NoAero>;

using Coefficients = std::array<double, 3>;  // C_L, C_D, C_M

struct CoeffSample {
    double alpha = 0.0;
    double lift = 0.0, drag = 0.0, moment = 0.0;
};

/// Analytic high-angle-of-attack coefficient model used in place of CFD data.
/// `incidence` is measured from the flow to the body axis (nose-up positive), so
/// the moment is positive nose-up for a centre of pressure ahead of the cg.
Coefficients standin_coeffs(double incidence);

/// n uniformly spaced flow angles alpha over [0, 2*pi), labelled with
/// standin_coeffs(-alpha) so they match angle_of_attack(). n >= 4.
std::vector<CoeffSample> generate_dataset(int n_samples);

/// Evaluates the network on an (already encoded) input pair.
template <class S>
std::array<S, 3> mlp_eval(const MlpSurrogate& model, const S& sin_a, const S& cos_a) {
    std::vector<S> act{sin_a, cos_a};
    std::vector<S> next;
    const std::size_t n_layers = model.layers.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        const DenseLayer& L = model.layers[l];
        next.assign(static_cast<std::size_t>(L.rows), S{});
        for (int r = 0; r < L.rows; ++r) {
            S acc = S(L.b[r]);
            const double* row = &L.w[static_cast<std::size_t>(r) * L.cols];
            for (int c = 0; c < L.cols; ++c) acc += act[c] * row[c];
            if (l + 1 < n_layers) {
                using std::tanh;
                acc = tanh(acc);
            }
            next[r] = acc;
        }
        act.swap(next);
    }
    return {act[0], act[1], act[2]};
}

/// Network prediction at angle of attack `alpha`; exactly periodic in the wrapped angle.
template <class S>
std::array<S, 3> mlp_forward(const MlpSurrogate& model, const S& alpha) {
    using std::cos;
    using std::sin;
    const S a = wrap_two_pi(alpha);
    return mlp_eval(model, sin(a), cos(a));
}

/// Vector-Jacobian product of the network output with respect to its encoded
/// inputs: returns (d/d sin a, d/d cos a) of  g . f(sin a, cos a).
std::array<double, 2> mlp_input_vjp(const MlpSurrogate& model, double sin_a, double cos_a,
                                    const Coefficients& g);

struct TrainerConfig {
    std::vector<int> hidden{32, 32};
    double learning_rate = 1e-3;
    int epochs = 20000;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Full-batch Adam on the joint mean squared error of all three coefficients.
/// Deterministic for a given seed. Throws NumericalError on a non-finite loss.
MlpSurrogate train_surrogate(const std::vector<CoeffSample>& dataset, const TrainerConfig& hyper,
                             std::uint64_t seed);

/// Mean squared error of the model over the dataset (all three outputs).
double surrogate_mse(const MlpSurrogate& model, const std::vector<CoeffSample>& dataset);

template <class S>
BasicAeroForces<S> simplified_forces(const BasicState<S>& s, const SimplifiedAero& model,
                                     const NondimScenario& scn) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const S speed2 = s.u() * s.u() + s.v() * s.v();
    if (value_of(speed2) < kStillAir * kStillAir) return {};
    const S speed = sqrt(speed2);
    const double k = 0.5 * scn.density * model.drag_coeff * scn.ref_area;
    BasicAeroForces<S> f;
    f.fx = -(k * speed * s.u());
    f.fy = -(k * speed * s.v());
    // cross2(-v, body axis)
    const S cross = (-s.u()) * sin(s.theta()) - (-s.v()) * cos(s.theta());
    f.moment = (model.cp_frac - scn.cg) * k * speed * cross;
    return f;
}

template <class S>
BasicAeroForces<S> surrogate_forces(const BasicState<S>& s, const MlpSurrogate& model,
                                    const NondimScenario& scn) {
    using std::sqrt;
    const S speed2 = s.u() * s.u() + s.v() * s.v();
    if (value_of(speed2) < kStillAir * kStillAir) return {};
    const S speed = sqrt(speed2);
    const std::array<S, 3> c = mlp_forward(model, angle_of_attack(s));
    const S& cl = c[0];
    const S& cd = c[1];
    const S& cm = c[2];
    // q * S_ref * v_hat == 0.5 * rho * S_ref * |v| * v
    const double half_rho_s = 0.5 * scn.density * scn.ref_area;
    const S qs_over_speed = half_rho_s * speed;
    BasicAeroForces<S> f;
    // drag along -v_hat, lift along v_hat rotated by +90 deg
    f.fx = qs_over_speed * (-(cd * s.u()) - cl * s.v());
    f.fy = qs_over_speed * (-(cd * s.v()) + cl * s.u());
    f.moment = half_rho_s * speed2 * cm;  // reference length is 1
    return f;
}

template <class S>
BasicAeroForces<S> aero_forces(const BasicState<S>& s, const AeroModel& model,
                               const NondimScenario& scn) {
    if (const auto* simp = std::get_if<SimplifiedAero>(&model)) return simplified_forces(s, *simp, scn);
    if (const auto* mlp = std::get_if<MlpSurrogate>(&model)) return surrogate_forces(s, *mlp, scn);
    return {};
}

/// Adjoint of aero_forces: given weights g on (F_x, F_y, M), returns g . dA/dstate.
VehicleState aero_vjp(const VehicleState& s, const AeroModel& model, const NondimScenario& scn,
                      const AeroForces& g);

/// One RK4 step of the coupled dynamics with a checked result.
/// Throws NumericalError(step, "stage N") if any stage derivative is non-finite.
VehicleState rk4_step(const VehicleState& s, const ControlInput& c, const AeroModel& model,
                      double dt, const NondimScenario& scn, int step_index = -1);

std::string aero_kind_name(const AeroModel& model);

}  // namespace flipopt
