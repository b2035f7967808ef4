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

namespace flipopt {

/// Forward-mode dual number carrying N directional derivatives.
///
/// The value part of every operation is computed with exactly the same
/// floating-point expression as the plain `double` path, so templated code
/// instantiated with Dual<N> reproduces the double results bit-for-bit.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

    static Dual variable(double value, int slot) {
        Dual r(value);
        r.d[slot] = 1.0;
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.v;
        const double q = v / o.v;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
        v = q;
        return *this;
    }
};

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <int N> Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> Dual<N> operator+(double a, Dual<N> b) { b.v = a + b.v; return b; }
template <int N> Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> Dual<N> operator-(double a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a - b.v;
    for (int i = 0; i < N; ++i) r.d[i] = -b.d[i];
    return r;
}
template <int N> Dual<N> operator*(Dual<N> a, double b) {
    a.v *= b;
    for (auto& x : a.d) x *= b;
    return a;
}
template <int N> Dual<N> operator*(double a, Dual<N> b) {
    b.v = a * b.v;
    for (auto& x : b.d) x = a * x;
    return b;
}
template <int N> Dual<N> operator/(Dual<N> a, double b) {
    a.v /= b;
    for (auto& x : a.d) x /= b;
    return a;
}
template <int N> Dual<N> operator/(double a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a / b.v;
    const double s = -r.v / b.v;
    for (int i = 0; i < N; ++i) r.d[i] = s * b.d[i];
    return r;
}
template <int N> Dual<N> operator-(Dual<N> a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
}

template <int N> bool operator<(const Dual<N>& a, double b) { return a.v < b; }
template <int N> bool operator>(const Dual<N>& a, double b) { return a.v > b; }

namespace detail {
template <int N>
Dual<N> chain(const Dual<N>& a, double value, double slope) {
    Dual<N> r;
    r.v = value;
    for (int i = 0; i < N; ++i) r.d[i] = slope * a.d[i];
    return r;
}
}  // namespace detail

template <int N> Dual<N> sin(const Dual<N>& a) { return detail::chain(a, std::sin(a.v), std::cos(a.v)); }
template <int N> Dual<N> cos(const Dual<N>& a) { return detail::chain(a, std::cos(a.v), -std::sin(a.v)); }
template <int N> Dual<N> exp(const Dual<N>& a) {
    const double e = std::exp(a.v);
    return detail::chain(a, e, e);
}
template <int N> Dual<N> tanh(const Dual<N>& a) {
    const double t = std::tanh(a.v);
    return detail::chain(a, t, 1.0 - t * t);
}
template <int N> Dual<N> sqrt(const Dual<N>& a) {
    const double s = std::sqrt(a.v);
    return detail::chain(a, s, s > 0.0 ? 0.5 / s : 0.0);
}
template <int N> Dual<N> atan2(const Dual<N>& y, const Dual<N>& x) {
    Dual<N> r;
    r.v = std::atan2(y.v, x.v);
    const double den = x.v * x.v + y.v * y.v;
    if (den > 0.0) {
        for (int i = 0; i < N; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) / den;
    }
    return r;
}

inline double value_of(double x) { return x; }
inline double value_of(long double x) { return static_cast<double>(x); }
template <int N> double value_of(const Dual<N>& x) { return x.v; }

}  // namespace flipopt
