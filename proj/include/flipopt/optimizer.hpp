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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flipopt/controls.hpp"
#include "flipopt/error.hpp"
#include "flipopt/rollout.hpp"
#include "flipopt/scenario.hpp"

namespace flipopt {

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// Bias-corrected Adam update applied in place. Throws NumericalError with the
/// parameter index if an update is non-finite; `params` is left untouched then.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& hyper);

/// Cosine annealing from lr_max at i = 0 down to lr_min at i = n_steps.
double cosine_lr(int i, const OptimizerConfig& cfg);

struct LossRecord {
    int step = 0;
    double lr = 0.0;
    LossBreakdown loss;
};

struct OptimizationResult {
    RawControls best;
    int best_step = 0;
    std::vector<LossRecord> history;
    Trajectory trajectory;  ///< rollout of `best`
    LossBreakdown final_loss;
    double wall_seconds = 0.0;
    GradientEngine engine = GradientEngine::bptt;
    int saturated_params = 0;  ///< |u| > 6 at the best iterate
    std::vector<std::string> warnings;
};

/// Thrown when the loss becomes non-finite; carries the iterate that produced it.
class OptimizationAborted : public NumericalError {
public:
    OptimizationAborted(const std::string& what, int step, RawControls snapshot)
        : NumericalError(what, step, "loss"), snapshot_(std::move(snapshot)) {}
    const RawControls& snapshot() const noexcept { return snapshot_; }

private:
    RawControls snapshot_;
};

using ProgressCallback = std::function<void(const LossRecord&)>;

/// Adam with cosine-annealed learning rate on the raw control parameters.
/// Returns the best iterate seen, not necessarily the last one.
OptimizationResult optimize(const NondimScenario& scn, const AeroModel& aero,
                            const OptimizerConfig& cfg, const ProgressCallback& progress = {});

/// Same loop from a caller-provided starting point.
OptimizationResult optimize_from(RawControls start, const NondimScenario& scn,
                                 const AeroModel& aero, const OptimizerConfig& cfg,
                                 const ProgressCallback& progress = {});

}  // namespace flipopt
