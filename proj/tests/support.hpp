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

// Shared helpers for the unit tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "gbs/gaussian_state.hpp"
#include "gbs/hafnian.hpp"

namespace gbs::testing {

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    const double scale = std::abs(want);
    return scale > 0 ? std::abs(got - want) / scale : std::abs(got);
}

inline CMatrix random_complex_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal;
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = {normal(engine), normal(engine)};
            m(j, i) = m(i, j);
        }
    return m;
}

/// Real symplectic form of a unitary: [[Re U, -Im U], [Im U, Re U]].
inline RMatrix passive_symplectic(const CMatrix &u) {
    const auto m = u.rows();
    RMatrix s(2 * m, 2 * m);
    s << u.real(), -u.imag(), u.imag(), u.real();
    return s;
}

/// Random physical state: U2 Z U1 acting on a thermal product with
/// symplectic eigenvalues (hbar/2)(1 + 2 n_i). `mixed` draws n_i > 0.
inline GaussianState random_state(int m, std::uint64_t seed, bool mixed, bool displaced, double max_r = 0.8,
                                  double hbar = kDefaultHbar) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal;
    RVector nu(2 * m), z(2 * m);
    for (int i = 0; i < m; ++i) {
        const double n = mixed ? 0.6 * uniform(engine) : 0.0;
        nu(i) = nu(m + i) = (hbar / 2) * (1 + 2 * n);
        const double r = max_r * uniform(engine);
        z(i) = std::exp(-r);
        z(m + i) = std::exp(r);
    }
    const RMatrix s = passive_symplectic(haar_unitary(m, seed * 7 + 1)) * z.asDiagonal() *
                      passive_symplectic(haar_unitary(m, seed * 7 + 2));
    const RMatrix v = s * nu.asDiagonal() * s.transpose();
    RVector r = RVector::Zero(2 * m);
    if (displaced)
        for (int i = 0; i < 2 * m; ++i) r(i) = 0.4 * normal(engine);
    return GaussianState::make(0.5 * (v + v.transpose()), r, hbar);
}

inline GaussianState single_mode(double r, double eta = 1.0, std::complex<double> alpha = {}, double hbar = kDefaultHbar) {
    const double sq[] = {r};
    const double tr[] = {eta};
    const std::complex<double> al[] = {alpha};
    return prepare_gbs_state(sq, CMatrix::Identity(1, 1), tr, al, hbar);
}

inline GaussianState thermal(int m, double nbar, double hbar = kDefaultHbar) {
    return GaussianState::make(RMatrix::Identity(2 * m, 2 * m) * (hbar / 2) * (2 * nbar + 1), RVector::Zero(2 * m),
                               hbar);
}

inline GaussianState coherent(std::span<const std::complex<double>> alpha, double hbar = kDefaultHbar) {
    const int m = static_cast<int>(alpha.size());
    return GaussianState::make(RMatrix::Identity(2 * m, 2 * m) * (hbar / 2), amplitudes_to_quadratures(alpha, hbar),
                               hbar);
}

/// Two-mode squeezed vacuum with squeezing r.
inline GaussianState two_mode_squeezed(double r, double hbar = kDefaultHbar) {
    const double c = std::cosh(2 * r), s = std::sinh(2 * r);
    RMatrix v = RMatrix::Zero(4, 4);
    // xxpp: (q1, q2, p1, p2)
    v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = c;
    v(0, 1) = v(1, 0) = s;
    v(2, 3) = v(3, 2) = -s;
    return GaussianState::make(v * (hbar / 2), RVector::Zero(4), hbar);
}

}  // namespace gbs::testing
