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
#include <cmath>

#include "flipopt/dual.hpp"
#include "flipopt/scenario.hpp"

namespace flipopt {

inline constexpr int kStateDim = 8;
inline constexpr int kControlDim = 2;

enum StateIndex : int { kX = 0, kY, kTheta, kU, kV, kOmega, kMass, kDeltaD };

inline constexpr std::array<const char*, kStateDim> kStateNames = {
    "x", "y", "theta", "u", "v", "omega", "m", "delta_d"};

/// Planar rigid-body state augmented with mass and lagged gimbal angle.
/// All entries are in reference units; angles in radians.
template <class S>
struct BasicState {
    std::array<S, kStateDim> q{};

    S& x() { return q[kX]; }
    S& y() { return q[kY]; }
    S& theta() { return q[kTheta]; }
    S& u() { return q[kU]; }
    S& v() { return q[kV]; }
    S& omega() { return q[kOmega]; }
    S& m() { return q[kMass]; }
    S& delta_d() { return q[kDeltaD]; }
    const S& x() const { return q[kX]; }
    const S& y() const { return q[kY]; }
    const S& theta() const { return q[kTheta]; }
    const S& u() const { return q[kU]; }
    const S& v() const { return q[kV]; }
    const S& omega() const { return q[kOmega]; }
    const S& m() const { return q[kMass]; }
    const S& delta_d() const { return q[kDeltaD]; }

    S& operator[](int i) { return q[i]; }
    const S& operator[](int i) const { return q[i]; }

    bool operator==(const BasicState&) const = default;
};

using VehicleState = BasicState<double>;
/// Time derivative of a state, one slot per state entry.
using StateDerivative = BasicState<double>;

template <class S>
struct BasicControl {
    S thrust{};  ///< reference force units
    S gimbal{};  ///< commanded deflection [rad]
};
using ControlInput = BasicControl<double>;

template <class S>
struct BasicAeroForces {
    S fx{}, fy{}, moment{};
};
using AeroForces = BasicAeroForces<double>;

template <class S>
struct ThrustLoad {
    S fx{}, fy{}, moment{};
};

/// Wrap an angle into [0, 2*pi). The derivative passes through unchanged.
inline double wrap_two_pi(double a) {
    constexpr double two_pi = 2.0 * kPi;
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}
inline long double wrap_two_pi(long double a) {
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    long double r = std::fmod(a, two_pi);
    if (r < 0.0L) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}
template <int N>
Dual<N> wrap_two_pi(const Dual<N>& a) {
    Dual<N> r = a;
    r.v = wrap_two_pi(a.v);
    return r;
}

inline constexpr double kStillAir = 1e-12;

/// Thrust applied at the base, deflected by the lagged gimbal from the body axis.
/// Positive deflection produces a negative (nose-down) pitching moment.
template <class S>
ThrustLoad<S> thrust_force_and_moment(const S& thrust, const S& delta_d, const S& theta,
                                      const NondimScenario& scn) {
    using std::cos;
    using std::sin;
    const S dir = theta + delta_d;
    return {thrust * cos(dir), thrust * sin(dir), -(thrust * sin(delta_d)) * scn.engine_arm};
}

/// Angle between the velocity vector and the body axis, in [0, 2*pi).
/// Returns 0 when the vehicle is (numerically) at rest.
template <class S>
S angle_of_attack(const BasicState<S>& s) {
    using std::atan2;
    using std::sqrt;
    if (value_of(s.u()) * value_of(s.u()) + value_of(s.v()) * value_of(s.v()) <
        kStillAir * kStillAir)
        return S(0.0);
    return wrap_two_pi(wrap_two_pi(atan2(s.v(), s.u())) - wrap_two_pi(s.theta()));
}

/// Equations of motion in reference units.
template <class S>
BasicState<S> rhs(const BasicState<S>& s, const BasicControl<S>& c, const BasicAeroForces<S>& a,
                  const NondimScenario& scn) {
    const ThrustLoad<S> t = thrust_force_and_moment(c.thrust, s.delta_d(), s.theta(), scn);
    BasicState<S> d;
    d.x() = s.u();
    d.y() = s.v();
    d.theta() = s.omega();
    d.u() = (t.fx + a.fx * scn.force_correction) / s.m();
    d.v() = (t.fy + a.fy * scn.force_correction) / s.m() - scn.gravity;
    d.omega() = (t.moment + a.moment * scn.moment_correction) / scn.inertia;
    d.m() = -(c.thrust / scn.exhaust_speed);
    d.delta_d() = (c.gimbal - s.delta_d()) / scn.actuator_lag;
    return d;
}

template <class S>
BasicState<S> axpy(const BasicState<S>& x, double h, const BasicState<S>& k) {
    BasicState<S> r;
    for (int i = 0; i < kStateDim; ++i) r.q[i] = x.q[i] + k.q[i] * h;
    return r;
}

struct NoStageCheck {
    template <class S>
    void operator()(int, const BasicState<S>&) const {}
};

/// Classical RK4 with zero-order-hold control; `aero` is re-evaluated at each
/// stage state. `Aero` is any callable `BasicAeroForces<S>(const BasicState<S>&)`.
/// `check(stage, k)` sees every stage derivative and may throw.
template <class S, class Aero, class Check = NoStageCheck>
BasicState<S> rk4_step_with(const BasicState<S>& x, const BasicControl<S>& c, Aero&& aero,
                            double dt, const NondimScenario& scn, Check&& check = {}) {
    const BasicState<S> k1 = rhs(x, c, aero(x), scn);
    check(1, k1);
    const BasicState<S> y2 = axpy(x, 0.5 * dt, k1);
    const BasicState<S> k2 = rhs(y2, c, aero(y2), scn);
    check(2, k2);
    const BasicState<S> y3 = axpy(x, 0.5 * dt, k2);
    const BasicState<S> k3 = rhs(y3, c, aero(y3), scn);
    check(3, k3);
    const BasicState<S> y4 = axpy(x, dt, k3);
    const BasicState<S> k4 = rhs(y4, c, aero(y4), scn);
    check(4, k4);
    BasicState<S> out;
    const double h6 = dt / 6.0;
    for (int i = 0; i < kStateDim; ++i)
        out.q[i] = x.q[i] + (k1.q[i] + 2.0 * k2.q[i] + 2.0 * k3.q[i] + k4.q[i]) * h6;
    return out;
}

/// Initial state in reference units.
VehicleState initial_state(const NondimScenario& scn);

}  // namespace flipopt
