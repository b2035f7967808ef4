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

#include "flipopt/controls.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "flipopt/error.hpp"

namespace flipopt {

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

void check_raw(const RawControls& raw) {
    if (raw.thrust.size() != raw.gimbal.size())
        throw ConfigError("raw", "thrust and gimbal sequences differ in length");
    for (int k = 0; k < raw.steps(); ++k) {
        if (!std::isfinite(raw.thrust[k]))
            throw NumericalError("non-finite raw thrust parameter at index " + std::to_string(k),
                                 k, "u_T");
        if (!std::isfinite(raw.gimbal[k]))
            throw NumericalError("non-finite raw gimbal parameter at index " + std::to_string(k),
                                 k, "u_delta");
    }
}

}  // namespace

ControlSequence reparameterize(const RawControls& raw, const NondimScenario& scn) {
    check_raw(raw);
    const double span = scn.max_thrust - scn.min_thrust;
    ControlSequence out;
    out.thrust.resize(raw.steps());
    out.gimbal.resize(raw.steps());
    for (int k = 0; k < raw.steps(); ++k) {
        // Clamp absorbs the last-ulp rounding of T_min + span at saturation.
        out.thrust[k] = std::clamp(scn.min_thrust + span * logistic(raw.thrust[k]), scn.min_thrust,
                                   scn.max_thrust);
        out.gimbal[k] = scn.max_gimbal * std::tanh(raw.gimbal[k]);
    }
    return out;
}

ControlSequence reparameterize_slopes(const RawControls& raw, const NondimScenario& scn) {
    check_raw(raw);
    const double span = scn.max_thrust - scn.min_thrust;
    ControlSequence out;
    out.thrust.resize(raw.steps());
    out.gimbal.resize(raw.steps());
    for (int k = 0; k < raw.steps(); ++k) {
        const double s = logistic(raw.thrust[k]);
        const double t = std::tanh(raw.gimbal[k]);
        out.thrust[k] = span * s * (1.0 - s);
        out.gimbal[k] = scn.max_gimbal * (1.0 - t * t);
    }
    return out;
}

RawControls unsquash(const ControlSequence& seq, const NondimScenario& scn) {
    constexpr double kLimit = 36.0;
    const double span = scn.max_thrust - scn.min_thrust;
    RawControls raw(seq.steps());
    for (int k = 0; k < seq.steps(); ++k) {
        const double p = (seq.thrust[k] - scn.min_thrust) / span;
        raw.thrust[k] = p <= 0.0 ? -kLimit : p >= 1.0 ? kLimit : std::log(p / (1.0 - p));
        const double g = seq.gimbal[k] / scn.max_gimbal;
        raw.gimbal[k] = g <= -1.0 ? -kLimit : g >= 1.0 ? kLimit : std::atanh(g);
    }
    return raw;
}

double smoothness_penalty(const ControlSequence& seq, const NondimScenario& scn) {
    const double tn = 1.0 / (scn.max_thrust * scn.max_thrust);
    const double gn = 1.0 / (scn.max_gimbal * scn.max_gimbal);
    double total = 0.0;
    for (int k = 0; k + 1 < seq.steps(); ++k) {
        const double dT = seq.thrust[k + 1] - seq.thrust[k];
        const double dg = seq.gimbal[k + 1] - seq.gimbal[k];
        total += dT * dT * tn + dg * dg * gn;
    }
    return total;
}

void smoothness_gradient(const ControlSequence& seq, const NondimScenario& scn, double weight,
                         std::vector<double>& d_thrust, std::vector<double>& d_gimbal) {
    const double tn = 2.0 * weight / (scn.max_thrust * scn.max_thrust);
    const double gn = 2.0 * weight / (scn.max_gimbal * scn.max_gimbal);
    for (int k = 0; k + 1 < seq.steps(); ++k) {
        const double dT = (seq.thrust[k + 1] - seq.thrust[k]) * tn;
        const double dg = (seq.gimbal[k + 1] - seq.gimbal[k]) * gn;
        d_thrust[k + 1] += dT;
        d_thrust[k] -= dT;
        d_gimbal[k + 1] += dg;
        d_gimbal[k] -= dg;
    }
}

RawControls initial_raw_controls(const NondimScenario& scn) {
    RawControls raw(scn.steps);
    const double hover = scn.wet_mass * scn.gravity;
    const double p = std::clamp((hover - scn.min_thrust) / (scn.max_thrust - scn.min_thrust),
                                1e-3, 1.0 - 1e-3);
    const double u = std::log(p / (1.0 - p));
    std::fill(raw.thrust.begin(), raw.thrust.end(), u);
    return raw;
}

RawControls random_raw_controls(int steps, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    auto draw = [&] { return scale * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0); };
    RawControls raw(steps);
    for (int k = 0; k < steps; ++k) {
        raw.thrust[k] = draw();
        raw.gimbal[k] = draw();
    }
    return raw;
}

int count_saturated(const RawControls& raw) {
    int n = 0;
    for (double x : raw.thrust) n += std::abs(x) > kSaturationGuard;
    for (double x : raw.gimbal) n += std::abs(x) > kSaturationGuard;
    return n;
}

void check_bounds(const ControlSequence& seq, const NondimScenario& scn) {
    if (seq.thrust.size() != seq.gimbal.size())
        throw ConfigError("controls", "thrust and gimbal sequences differ in length");
    // One part in 1e12 of slack covers decimal round-tripping through files.
    const double t_slack = 1e-12 * scn.max_thrust;
    const double g_slack = 1e-12 * scn.max_gimbal;
    for (int k = 0; k < seq.steps(); ++k) {
        if (!(seq.thrust[k] >= scn.min_thrust - t_slack && seq.thrust[k] <= scn.max_thrust + t_slack))
            throw ConfigError("controls[" + std::to_string(k) + "].thrust",
                              "outside the throttle range");
        if (!(std::abs(seq.gimbal[k]) <= scn.max_gimbal + g_slack))
            throw ConfigError("controls[" + std::to_string(k) + "].delta",
                              "outside the gimbal limit");
    }
}

}  // namespace flipopt
