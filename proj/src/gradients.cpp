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

#include "flipopt/gradients.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace flipopt {

const char* engine_name(GradientEngine e) {
    switch (e) {
        case GradientEngine::bptt: return "bptt";
        case GradientEngine::adjoint: return "adjoint";
        case GradientEngine::finite_diff: return "finite_diff";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Tracks live bytes of auxiliary storage and the high-water mark.
class MemoryMeter {
public:
    void acquire(std::size_t bytes) {
        live_ += bytes;
        peak_ = std::max(peak_, live_);
    }
    void release(std::size_t bytes) { live_ -= bytes; }
    std::size_t peak() const { return peak_; }

private:
    std::size_t live_ = 0;
    std::size_t peak_ = 0;
};

void check_finite_gradient(const std::vector<double>& g, const char* which) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i]))
            throw NumericalError(std::string("non-finite gradient of ") + which + " at index " +
                                     std::to_string(i),
                                 static_cast<int>(i), which);
    }
}

void check_finite_state(const VehicleState& s, int k) {
    for (int i = 0; i < kStateDim; ++i) {
        if (!std::isfinite(s[i]))
            throw NumericalError("non-finite " + std::string(kStateNames[i]) + " after step " +
                                     std::to_string(k),
                                 k, kStateNames[i]);
    }
}

/// Chain the command-space gradient through the squashing maps and add the
/// smoothness term.
void finish_raw_gradient(GradientReport& out, const RawControls& raw, const ControlSequence& seq,
                         std::vector<double> d_thrust, std::vector<double> d_gimbal,
                         const NondimScenario& scn) {
    smoothness_gradient(seq, scn, scn.weights.smooth, d_thrust, d_gimbal);
    const ControlSequence slope = reparameterize_slopes(raw, scn);
    const int K = raw.steps();
    out.thrust.resize(K);
    out.gimbal.resize(K);
    for (int k = 0; k < K; ++k) {
        out.thrust[k] = d_thrust[k] * slope.thrust[k];
        out.gimbal[k] = d_gimbal[k] * slope.gimbal[k];
    }
    check_finite_gradient(out.thrust, "u_T");
    check_finite_gradient(out.gimbal, "u_delta");
}

// ---------------------------------------------------------------- BPTT

constexpr int kSeeds = kStateDim + kControlDim;
using StepDual = Dual<kSeeds>;

struct StepRecord {
    VehicleState state;                                  ///< state at step start
    std::array<double, kStateDim * kStateDim> jac_x;     ///< d x_{k+1} / d x_k, row-major
    std::array<double, kStateDim * kControlDim> jac_c;   ///< d x_{k+1} / d (T, delta)
};

}  // namespace

GradientReport grad_bptt(const RawControls& raw, const NondimScenario& scn, const AeroModel& aero) {
    const auto t0 = Clock::now();
    const ControlSequence seq = reparameterize(raw, scn);
    const int K = seq.steps();
    MemoryMeter meter;
    std::vector<StepRecord> tape;
    tape.reserve(K);

    auto aero_dual = [&](const BasicState<StepDual>& y) { return aero_forces(y, aero, scn); };

    Trajectory traj;
    traj.dt = scn.dt;
    traj.controls = seq;
    traj.states.reserve(K + 1);
    traj.states.push_back(initial_state(scn));
    for (int k = 0; k < K; ++k) {
        const VehicleState& x = traj.states.back();
        BasicState<StepDual> xd;
        for (int i = 0; i < kStateDim; ++i) xd[i] = StepDual::variable(x[i], i);
        const BasicControl<StepDual> cd{StepDual::variable(seq.thrust[k], kStateDim),
                                        StepDual::variable(seq.gimbal[k], kStateDim + 1)};
        const BasicState<StepDual> next = rk4_step_with(xd, cd, aero_dual, scn.dt, scn);

        StepRecord rec;
        rec.state = x;
        VehicleState nx;
        for (int i = 0; i < kStateDim; ++i) {
            nx[i] = next[i].v;
            for (int j = 0; j < kStateDim; ++j) rec.jac_x[i * kStateDim + j] = next[i].d[j];
            for (int c = 0; c < kControlDim; ++c)
                rec.jac_c[i * kControlDim + c] = next[i].d[kStateDim + c];
        }
        check_finite_state(nx, k);
        tape.push_back(rec);
        meter.acquire(sizeof(StepRecord));
        traj.states.push_back(nx);
    }

    GradientReport out;
    out.engine = GradientEngine::bptt;
    out.loss = loss(traj, scn);

    std::vector<double> d_thrust(K, 0.0), d_gimbal(K, 0.0);
    VehicleState lambda = loss_state_partial(traj.states[K], K, scn);
    for (int k = K - 1; k >= 0; --k) {
        const StepRecord& rec = tape[k];
        double gT = 0.0, gD = 0.0;
        for (int i = 0; i < kStateDim; ++i) {
            gT += rec.jac_c[i * kControlDim + 0] * lambda[i];
            gD += rec.jac_c[i * kControlDim + 1] * lambda[i];
        }
        d_thrust[k] = gT;
        d_gimbal[k] = gD;
        VehicleState prev = loss_state_partial(rec.state, k, scn);
        for (int j = 0; j < kStateDim; ++j) {
            double acc = 0.0;
            for (int i = 0; i < kStateDim; ++i) acc += rec.jac_x[i * kStateDim + j] * lambda[i];
            prev[j] += acc;
        }
        lambda = prev;
    }

    finish_raw_gradient(out, raw, seq, std::move(d_thrust), std::move(d_gimbal), scn);
    out.peak_aux_bytes = meter.peak();
    out.forward_work = K;
    out.wall_seconds = seconds_since(t0);
    return out;
}

// ---------------------------------------------------------------- adjoint

namespace {

struct RhsCotangent {
    VehicleState state;
    double thrust = 0.0;
    double gimbal = 0.0;
};

/// w . d rhs / d(state, control), aerodynamics included.
RhsCotangent rhs_vjp(const VehicleState& s, const ControlInput& c, const AeroModel& aero,
                     const NondimScenario& scn, const VehicleState& w) {
    const AeroForces a = aero_forces(s, aero, scn);
    const double T = c.thrust;
    const double m = s.m();
    const double phi = s.theta() + s.delta_d();
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    const double cdd = std::cos(s.delta_d());
    const double sdd = std::sin(s.delta_d());
    const double eps = scn.force_correction;
    const double eta = scn.moment_correction;
    const double J = scn.inertia;
    const double arm = scn.engine_arm;

    RhsCotangent g;
    VehicleState& gs = g.state;
    gs.u() += w.x();
    gs.v() += w.y();
    gs.omega() += w.theta();

    // u' = (T cos(phi) + eps Fx) / m
    gs.theta() += w.u() * (-T * sphi / m);
    gs.delta_d() += w.u() * (-T * sphi / m);
    gs.m() += w.u() * (-(T * cphi + eps * a.fx) / (m * m));
    g.thrust += w.u() * cphi / m;
    // v' = (T sin(phi) + eps Fy) / m - g
    gs.theta() += w.v() * (T * cphi / m);
    gs.delta_d() += w.v() * (T * cphi / m);
    gs.m() += w.v() * (-(T * sphi + eps * a.fy) / (m * m));
    g.thrust += w.v() * sphi / m;
    // omega' = (-T sin(delta_d) arm + eta M) / J
    gs.delta_d() += w.omega() * (-T * cdd * arm / J);
    g.thrust += w.omega() * (-sdd * arm / J);
    // m' = -T / c
    g.thrust += w.m() * (-1.0 / scn.exhaust_speed);
    // delta_d' = (delta - delta_d) / T_d
    g.gimbal += w.delta_d() / scn.actuator_lag;
    gs.delta_d() += -w.delta_d() / scn.actuator_lag;

    const AeroForces ga{w.u() * eps / m, w.v() * eps / m, w.omega() * eta / J};
    const VehicleState from_aero = aero_vjp(s, aero, scn, ga);
    for (int i = 0; i < kStateDim; ++i) gs[i] += from_aero[i];
    return g;
}

long long binomial_capacity(int slots, int reps) {
    // C(slots + reps, slots), saturating.
    long double r = 1.0L;
    for (int i = 1; i <= slots; ++i) {
        r = r * (reps + i) / i;
        if (r > 1e18L) return std::numeric_limits<long long>::max();
    }
    return static_cast<long long>(r + 0.5L);
}

class AdjointSweep {
public:
    AdjointSweep(const ControlSequence& seq, const NondimScenario& scn, const AeroModel& aero)
        : d_thrust(seq.steps(), 0.0), d_gimbal(seq.steps(), 0.0), seq_(seq), scn_(scn),
          aero_(aero) {}

    /// Reverse steps [a, b) given the state at a, with `slots` free checkpoints.
    void reverse(int a, int b, const VehicleState& xa, int slots) {
        const int n = b - a;
        if (n <= 0) return;
        if (n == 1) {
            adjoint_step(a, xa);
            return;
        }
        if (slots == 0) {
            for (int k = b - 1; k >= a; --k) adjoint_step(k, advance(xa, a, k));
            return;
        }
        int reps = 1;
        while (binomial_capacity(slots, reps) < n) ++reps;
        const long long right_cap = binomial_capacity(slots - 1, reps);
        const long long left_cap = binomial_capacity(slots, reps - 1);
        long long left = std::max<long long>(1, n - right_cap);
        left = std::min<long long>({left, left_cap, n - 1});
        const int mid = a + static_cast<int>(left);

        const VehicleState xm = advance(xa, a, mid);
        meter.acquire(sizeof(VehicleState));
        reverse(mid, b, xm, slots - 1);
        meter.release(sizeof(VehicleState));
        reverse(a, mid, xa, slots);
    }

    MemoryMeter meter;
    std::vector<double> d_thrust;
    std::vector<double> d_gimbal;
    long forward_steps = 0;
    double path_mass = 0.0;
    double path_flip = 0.0;
    VehicleState terminal;

private:
    ControlInput control(int k) const { return {seq_.thrust[k], seq_.gimbal[k]}; }

    VehicleState step(const VehicleState& x, int k) {
        ++forward_steps;
        VehicleState nx = rk4_step(x, control(k), aero_, scn_.dt, scn_, k);
        check_finite_state(nx, k);
        return nx;
    }

    VehicleState advance(VehicleState x, int from, int to) {
        for (int k = from; k < to; ++k) x = step(x, k);
        return x;
    }

    void accumulate_path(const VehicleState& s, int k) {
        const double short_fall = std::max(0.0, scn_.dry_mass - s.m());
        path_mass += short_fall * short_fall;
        if (k * scn_.dt > scn_.flip_deadline) {
            const double e = s.theta() - scn_.thetaf;
            path_flip += e * e;
        }
    }

    /// Pull lambda from t_{k+1} back to t_k through one RK4 step started at x.
    void adjoint_step(int k, const VehicleState& x) {
        const int K = seq_.steps();
        if (!started_) {
            // First call is always the last step: seed the terminal condition.
            terminal = step(x, k);
            lambda_ = loss_state_partial(terminal, K, scn_);
            accumulate_path(terminal, K);
            started_ = true;
        }
        const ControlInput c = control(k);
        const double h = scn_.dt;

        // Stage states of the forward step (recomputed, not stored).
        std::array<VehicleState, 4> y;
        std::array<VehicleState, 4> kk;
        meter.acquire(sizeof(y) + sizeof(kk));
        y[0] = x;
        kk[0] = rhs(y[0], c, aero_forces(y[0], aero_, scn_), scn_);
        y[1] = axpy(x, 0.5 * h, kk[0]);
        kk[1] = rhs(y[1], c, aero_forces(y[1], aero_, scn_), scn_);
        y[2] = axpy(x, 0.5 * h, kk[1]);
        kk[2] = rhs(y[2], c, aero_forces(y[2], aero_, scn_), scn_);
        y[3] = axpy(x, h, kk[2]);

        // Cotangents of the four stage derivatives.
        std::array<VehicleState, 4> a;
        const double w[4] = {h / 6.0, h / 3.0, h / 3.0, h / 6.0};
        for (int s = 0; s < 4; ++s)
            for (int i = 0; i < kStateDim; ++i) a[s][i] = w[s] * lambda_[i];

        VehicleState next_lambda = lambda_;
        const double feed[4] = {0.0, 0.5 * h, 0.5 * h, h};  // y[s] = x + feed[s] * k[s-1]
        double gT = 0.0, gD = 0.0;
        for (int s = 3; s >= 0; --s) {
            const RhsCotangent g = rhs_vjp(y[s], c, aero_, scn_, a[s]);
            for (int i = 0; i < kStateDim; ++i) {
                next_lambda[i] += g.state[i];
                if (s > 0) a[s - 1][i] += feed[s] * g.state[i];
            }
            gT += g.thrust;
            gD += g.gimbal;
        }
        meter.release(sizeof(y) + sizeof(kk));

        d_thrust[k] = gT;
        d_gimbal[k] = gD;
        const VehicleState p = loss_state_partial(x, k, scn_);
        for (int i = 0; i < kStateDim; ++i) next_lambda[i] += p[i];
        accumulate_path(x, k);
        lambda_ = next_lambda;
    }

    const ControlSequence& seq_;
    const NondimScenario& scn_;
    const AeroModel& aero_;
    VehicleState lambda_;
    bool started_ = false;
};

}  // namespace

GradientReport grad_adjoint(const RawControls& raw, const NondimScenario& scn,
                            const AeroModel& aero, const AdjointOptions& opts) {
    const auto t0 = Clock::now();
    if (opts.checkpoint_slots < 1) throw ConfigError("checkpoint_slots", "must be >= 1");
    const ControlSequence seq = reparameterize(raw, scn);
    const int K = seq.steps();

    AdjointSweep sweep(seq, scn, aero);
    const VehicleState x0 = initial_state(scn);
    sweep.meter.acquire(sizeof(VehicleState));  // the initial-state checkpoint
    sweep.reverse(0, K, x0, opts.checkpoint_slots - 1);
    sweep.meter.release(sizeof(VehicleState));

    GradientReport out;
    out.engine = GradientEngine::adjoint;
    {
        const LossWeights& w = scn.weights;
        const VehicleState& e = sweep.terminal;
        auto& t = out.loss.terms;
        const double dx = e.x() - scn.rf[0], dy = e.y() - scn.rf[1];
        const double du = e.u() - scn.vf[0], dv = e.v() - scn.vf[1];
        const double dth = e.theta() - scn.thetaf, dom = e.omega() - scn.omegaf;
        t[static_cast<int>(LossTerm::terminal_position)] = w.position * (dx * dx + dy * dy);
        t[static_cast<int>(LossTerm::terminal_velocity)] = w.velocity * (du * du + dv * dv);
        t[static_cast<int>(LossTerm::terminal_pitch)] = w.pitch * dth * dth;
        t[static_cast<int>(LossTerm::terminal_omega)] = w.omega * dom * dom;
        t[static_cast<int>(LossTerm::smoothness)] = w.smooth * smoothness_penalty(seq, scn);
        t[static_cast<int>(LossTerm::mass_floor)] = w.mass * sweep.path_mass;
        t[static_cast<int>(LossTerm::flip_deadline)] = w.flip * sweep.path_flip;
        for (double x : t) out.loss.total += x;
    }
    finish_raw_gradient(out, raw, seq, std::move(sweep.d_thrust), std::move(sweep.d_gimbal), scn);
    out.peak_aux_bytes = sweep.meter.peak();
    out.forward_work = sweep.forward_steps;
    out.wall_seconds = seconds_since(t0);
    return out;
}

// ---------------------------------------------------------------- finite differences

long double evaluate_loss_wide(const RawControls& raw, const NondimScenario& scn,
                               const AeroModel& aero) {
    using W = long double;
    const int K = raw.steps();
    const W t_min = scn.min_thrust, t_max = scn.max_thrust;
    std::vector<W> thrust(K), gimbal(K);
    for (int k = 0; k < K; ++k) {
        const W u = raw.thrust[k];
        const W s = u >= 0 ? 1.0L / (1.0L + std::exp(-u)) : std::exp(u) / (1.0L + std::exp(u));
        thrust[k] = std::clamp(t_min + (t_max - t_min) * s, t_min, t_max);
        gimbal[k] = W(scn.max_gimbal) * std::tanh(W(raw.gimbal[k]));
    }

    const LossWeights& w = scn.weights;
    BasicState<W> x;
    const VehicleState x0 = initial_state(scn);
    for (int i = 0; i < kStateDim; ++i) x.q[i] = x0.q[i];
    auto aero_at = [&](const BasicState<W>& s) { return aero_forces(s, aero, scn); };
    auto penalties = [&](const BasicState<W>& s, int k) {
        const W short_fall = std::max(W(0), W(scn.dry_mass) - s.m());
        W p = w.mass * short_fall * short_fall;
        if (k * scn.dt > scn.flip_deadline) {
            const W e = s.theta() - W(scn.thetaf);
            p += w.flip * e * e;
        }
        return p;
    };
    W total = penalties(x, 0);
    for (int k = 0; k < K; ++k) {
        x = rk4_step_with(x, BasicControl<W>{thrust[k], gimbal[k]}, aero_at, scn.dt, scn);
        total += penalties(x, k + 1);
    }
    const W dx = x.x() - W(scn.rf[0]), dy = x.y() - W(scn.rf[1]);
    const W du = x.u() - W(scn.vf[0]), dv = x.v() - W(scn.vf[1]);
    const W dth = x.theta() - W(scn.thetaf), dom = x.omega() - W(scn.omegaf);
    total += w.position * (dx * dx + dy * dy) + w.velocity * (du * du + dv * dv) +
             w.pitch * dth * dth + w.omega * dom * dom;

    const W tn = 1.0L / (t_max * t_max);
    const W gn = 1.0L / (W(scn.max_gimbal) * W(scn.max_gimbal));
    W smooth = 0;
    for (int k = 0; k + 1 < K; ++k) {
        const W dT = thrust[k + 1] - thrust[k], dg = gimbal[k + 1] - gimbal[k];
        smooth += dT * dT * tn + dg * dg * gn;
    }
    return total + w.smooth * smooth;
}

GradientReport finite_diff_grad(const RawControls& raw, const NondimScenario& scn,
                                const AeroModel& aero, double h) {
    if (!(h > 0.0)) throw ConfigError("h", "finite-difference step must be > 0");
    const auto t0 = Clock::now();
    const int K = raw.steps();
    GradientReport out;
    out.engine = GradientEngine::finite_diff;
    out.loss = loss(rollout(raw, scn, aero), scn);
    out.thrust.resize(K);
    out.gimbal.resize(K);
    long rollouts = 0;
    auto central = [&](std::vector<double> RawControls::*field, int k) {
        RawControls p = raw;
        (p.*field)[k] = (raw.*field)[k] + h;
        const long double up = evaluate_loss_wide(p, scn, aero);
        (p.*field)[k] = (raw.*field)[k] - h;
        const long double down = evaluate_loss_wide(p, scn, aero);
        rollouts += 2;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw NumericalError("non-finite loss in finite differences at parameter " +
                                     std::to_string(k),
                                 k, "finite_diff");
        // Differences of the actual perturbed parameters, not of h itself.
        const long double span = static_cast<long double>((raw.*field)[k] + h) -
                                 static_cast<long double>((raw.*field)[k] - h);
        return static_cast<double>((up - down) / span);
    };
    for (int k = 0; k < K; ++k) {
        out.thrust[k] = central(&RawControls::thrust, k);
        out.gimbal[k] = central(&RawControls::gimbal, k);
    }
    out.forward_work = rollouts;
    out.wall_seconds = seconds_since(t0);
    return out;
}

GradientReport compute_gradient(GradientEngine engine, const RawControls& raw,
                                const NondimScenario& scn, const AeroModel& aero,
                                int checkpoint_slots) {
    switch (engine) {
        case GradientEngine::bptt: return grad_bptt(raw, scn, aero);
        case GradientEngine::adjoint: return grad_adjoint(raw, scn, aero, {checkpoint_slots});
        case GradientEngine::finite_diff: return finite_diff_grad(raw, scn, aero);
    }
    throw ConfigError("engine", "unknown gradient engine");
}

GradientComparison compare_gradients(const GradientReport& g, const GradientReport& reference,
                                     double rel_tol, double abs_floor) {
    GradientComparison cmp;
    const int K = static_cast<int>(reference.thrust.size());
    if (static_cast<int>(g.thrust.size()) != K || g.gimbal.size() != reference.gimbal.size())
        throw ConfigError("gradient", "length mismatch");
    double worst_score = -1.0;
    for (int i = 0; i < 2 * K; ++i) {
        const double x = i < K ? g.thrust[i] : g.gimbal[i - K];
        const double r = i < K ? reference.thrust[i] : reference.gimbal[i - K];
        const double err = std::abs(x - r);
        double score;
        if (std::abs(r) > abs_floor) {
            const double rel = err / std::abs(r);
            cmp.max_rel_error = std::max(cmp.max_rel_error, rel);
            score = rel / rel_tol;
        } else {
            cmp.max_abs_error = std::max(cmp.max_abs_error, err);
            score = err / abs_floor;
        }
        if (!(score <= worst_score)) {
            worst_score = score;
            cmp.worst_index = i;
            cmp.worst_value = x;
            cmp.worst_reference = r;
        }
    }
    cmp.passed = cmp.max_rel_error < rel_tol && cmp.max_abs_error < abs_floor;
    return cmp;
}

double relative_mae(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("mae", "length mismatch");
    if (a.empty()) return 0.0;
    double err = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err += std::abs(a[i] - b[i]);
        mag += std::abs(b[i]);
    }
    if (mag == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return err / mag;
}

}  // namespace flipopt
