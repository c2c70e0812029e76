// Copyright 2026 The gbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scalar types used by the hafnian kernel: a software double-double real
// and a minimal complex template that works for double, long double and
// DoubleDouble alike. std::complex is only specified for the built-in
// floating types, so the kernel carries its own.

#include <cmath>
#include <complex>

namespace gbs {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2 (about 106 bits of
/// mantissa). Requires strict IEEE evaluation: do not build with -ffast-math.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit by design of numeric types
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}
    explicit DoubleDouble(long double x) : hi(static_cast<double>(x)), lo(static_cast<double>(x - static_cast<long double>(hi))) {}

    explicit operator double() const { return hi + lo; }
    explicit operator long double() const { return static_cast<long double>(hi) + static_cast<long double>(lo); }
};

namespace dd_detail {

inline DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator-(const DoubleDouble &a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble &a, const DoubleDouble &b) {
    DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
    DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble &a, const DoubleDouble &b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble &a, const DoubleDouble &b) {
    DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble &a, const DoubleDouble &b) {
    double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    double q3 = r.hi / b.hi;
    DoubleDouble q = dd_detail::quick_two_sum(q1, q2);
    return q + DoubleDouble(q3);
}

inline DoubleDouble &operator+=(DoubleDouble &a, const DoubleDouble &b) { return a = a + b; }
inline DoubleDouble &operator-=(DoubleDouble &a, const DoubleDouble &b) { return a = a - b; }
inline DoubleDouble &operator*=(DoubleDouble &a, const DoubleDouble &b) { return a = a * b; }
inline DoubleDouble &operator/=(DoubleDouble &a, const DoubleDouble &b) { return a = a / b; }

inline bool operator<(const DoubleDouble &a, const DoubleDouble &b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(const DoubleDouble &a, const DoubleDouble &b) { return b < a; }
inline bool operator==(const DoubleDouble &a, const DoubleDouble &b) { return a.hi == b.hi && a.lo == b.lo; }

inline DoubleDouble abs(const DoubleDouble &a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble sqrt(const DoubleDouble &a) {
    if (a.hi <= 0.0) return DoubleDouble(0.0);
    double x = std::sqrt(a.hi);
    DoubleDouble r = a - dd_detail::two_prod(x, x);
    return dd_detail::quick_two_sum(x, r.hi * (0.5 / x));
}

inline bool isfinite(const DoubleDouble &a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

/// Plain complex number over any of the kernel's real types.
template <typename Real>
struct Complex {
    Real re{};
    Real im{};

    constexpr Complex() = default;
    constexpr Complex(Real r) : re(r), im(Real(0.0)) {}  // NOLINT
    constexpr Complex(Real r, Real i) : re(r), im(i) {}

    Complex &operator+=(const Complex &o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex &operator-=(const Complex &o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex &operator*=(const Complex &o) { return *this = *this * o; }

    friend Complex operator+(const Complex &a, const Complex &b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex &a, const Complex &b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex &a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex &a, const Complex &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex &a, const Real &s) { return {a.re * s, a.im * s}; }
    friend Complex operator*(const Real &s, const Complex &a) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex &a, const Real &s) { return {a.re / s, a.im / s}; }
    friend Complex operator/(const Complex &a, const Complex &b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
};

template <typename Real>
inline Complex<Real> conj(const Complex<Real> &z) {
    return {z.re, -z.im};
}

template <typename Real>
inline Real norm(const Complex<Real> &z) {
    return z.re * z.re + z.im * z.im;
}

template <typename Real>
inline Real abs(const Complex<Real> &z) {
    using std::sqrt;
    return sqrt(norm(z));
}

template <typename Real>
inline Complex<Real> from_std(const std::complex<double> &z) {
    return {Real(z.real()), Real(z.imag())};
}

template <typename Real>
inline std::complex<long double> to_std_ld(const Complex<Real> &z) {
    return {static_cast<long double>(z.re), static_cast<long double>(z.im)};
}

}  // namespace gbs
