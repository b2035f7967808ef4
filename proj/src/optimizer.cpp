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

#include "flipopt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "flipopt/gradients.hpp"

namespace flipopt {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& hyper) {
    if (params.size() != grads.size() || state.m.size() != params.size() ||
        state.v.size() != params.size())
        throw ConfigError("adam", "parameter, gradient and moment sizes differ");
    const long t = state.t + 1;
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));

    std::vector<double> m(state.m), v(state.v), p(params.begin(), params.end());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g;
        v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g * g;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        p[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
        if (!std::isfinite(p[i]))
            throw NumericalError("non-finite Adam update at parameter " + std::to_string(i),
                                 static_cast<int>(i), "adam");
    }
    std::copy(p.begin(), p.end(), params.begin());
    state.m = std::move(m);
    state.v = std::move(v);
    state.t = t;
}

double cosine_lr(int i, const OptimizerConfig& cfg) {
    const double frac = static_cast<double>(std::clamp(i, 0, cfg.n_steps)) / cfg.n_steps;
    return cfg.lr_min + 0.5 * (cfg.lr_max - cfg.lr_min) * (1.0 + std::cos(kPi * frac));
}

OptimizationResult optimize(const NondimScenario& scn, const AeroModel& aero,
                            const OptimizerConfig& cfg, const ProgressCallback& progress) {
    return optimize_from(initial_raw_controls(scn), scn, aero, cfg, progress);
}

OptimizationResult optimize_from(RawControls start, const NondimScenario& scn,
                                 const AeroModel& aero, const OptimizerConfig& cfg,
                                 const ProgressCallback& progress) {
    if (cfg.engine == GradientEngine::finite_diff)
        throw ConfigError("opt.grad_engine", "must be bptt or adjoint");
    if (cfg.n_steps < 1) throw ConfigError("opt.n_steps", "must be >= 1");
    if (start.steps() != scn.steps) throw ConfigError("raw", "length does not match K");
    const auto t0 = std::chrono::steady_clock::now();

    OptimizationResult result;
    result.engine = cfg.engine;
    result.history.reserve(cfg.n_steps);
    if (int n = count_saturated(start); n > 0)
        result.warnings.push_back(std::to_string(n) + " initial raw parameters saturated (|u| > 6)");

    const int K = start.steps();
    std::vector<double> params(2 * K);
    std::copy(start.thrust.begin(), start.thrust.end(), params.begin());
    std::copy(start.gimbal.begin(), start.gimbal.end(), params.begin() + K);
    std::vector<double> grads(2 * K);
    AdamState state(params.size());
    const AdamHyper hyper{cfg.beta1, cfg.beta2, cfg.eps};

    RawControls current = start;
    double best_loss = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.n_steps; ++i) {
        std::copy(params.begin(), params.begin() + K, current.thrust.begin());
        std::copy(params.begin() + K, params.end(), current.gimbal.begin());
        GradientReport g;
        try {
            g = compute_gradient(cfg.engine, current, scn, aero, cfg.checkpoint_slots);
        } catch (const NumericalError& e) {
            throw OptimizationAborted(std::string(e.what()) + " (optimisation step " +
                                          std::to_string(i) + ")",
                                      i, current);
        }
        if (!std::isfinite(g.loss.total))
            throw OptimizationAborted("non-finite loss at optimisation step " + std::to_string(i),
                                      i, current);

        const double lr = cosine_lr(i, cfg);
        LossRecord rec{i, lr, g.loss};
        result.history.push_back(rec);
        if (progress) progress(rec);
        if (g.loss.total < best_loss) {
            best_loss = g.loss.total;
            result.best = current;
            result.best_step = i;
        }

        std::copy(g.thrust.begin(), g.thrust.end(), grads.begin());
        std::copy(g.gimbal.begin(), g.gimbal.end(), grads.begin() + K);
        if (cfg.clip_grad_inf > 0.0)
            for (double& x : grads) x = std::clamp(x, -cfg.clip_grad_inf, cfg.clip_grad_inf);
        try {
            adam_step(params, grads, state, lr, hyper);
        } catch (const NumericalError& e) {
            throw OptimizationAborted(e.what(), i, current);
        }
    }

    result.trajectory = rollout(result.best, scn, aero);
    result.final_loss = loss(result.trajectory, scn);
    result.saturated_params = count_saturated(result.best);
    if (result.saturated_params > 0)
        result.warnings.push_back(std::to_string(result.saturated_params) +
                                  " raw parameters saturated (|u| > 6) at the best iterate");
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace flipopt
