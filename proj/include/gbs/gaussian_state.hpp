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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gbs/hafnian.hpp"

namespace gbs {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultHbar = 2.0;
inline constexpr double kPurityTolerance = 1e-6;
inline constexpr double kPhysicalTolerance = 1e-8;

/// Gaussian state of m bosonic modes in the quadrature basis, ordered
/// (q_1..q_m, p_1..p_m). Immutable once built; make() validates symmetry
/// and the uncertainty relation V + i(hbar/2) Omega >= 0.
class GaussianState {
  public:
    static GaussianState make(RMatrix cov, RVector means, double hbar = kDefaultHbar);
    static GaussianState vacuum(int modes, double hbar = kDefaultHbar);

    int modes() const { return modes_; }
    double hbar() const { return hbar_; }
    const RMatrix &cov() const { return cov_; }
    const RVector &means() const { return means_; }

    /// det(2V/hbar); equals one for pure states.
    double purity_determinant() const { return purity_det_; }
    bool is_pure() const { return std::abs(purity_det_ - 1.0) <= kPurityTolerance; }
    bool is_displaced() const { return means_.size() > 0 && means_.cwiseAbs().maxCoeff() > 0.0; }

    /// Complex mean amplitudes alpha_i = (q_i + i p_i)/sqrt(2 hbar).
    CVector mean_amplitudes() const;

  private:
    GaussianState(RMatrix cov, RVector means, double hbar, double purity_det)
        : modes_(static_cast<int>(means.size() / 2)), hbar_(hbar), purity_det_(purity_det), cov_(std::move(cov)),
          means_(std::move(means)) {}

    int modes_ = 0;
    double hbar_ = kDefaultHbar;
    double purity_det_ = 1.0;
    RMatrix cov_;
    RVector means_;
};

/// Omega = [[0, I], [-I, 0]] in xxpp ordering.
RMatrix symplectic_form(int modes);

/// Smallest eigenvalue of the Hermitian matrix V + i(hbar/2) Omega.
double min_uncertainty_eigenvalue(const RMatrix &cov, double hbar);

/// Sigma = F V F^dagger with F = (1/sqrt(2 hbar)) [[I, iI], [I, -iI]].
CMatrix to_complex_covariance(const GaussianState &state);

/// Complex-basis quantities of a state: Q = Sigma + I/2, A = X (I - Q^-1)^*,
/// alpha = F R, gamma = Q^-1 alpha and the vacuum probability. For pure
/// states A = B (+) B^* and `b`, `gamma_bar` hold the upper blocks.
struct ComplexForm {
    CMatrix sigma;
    CMatrix q;
    CMatrix q_inv;
    CMatrix a;
    CVector alpha;
    CVector gamma;
    double log_det_q = 0.0;
    double pvac = 1.0;

    bool pure = false;
    CMatrix b;
    CVector gamma_bar;
};

enum class PureExtraction {
    Auto,     ///< extract B when the state passes the purity test
    Require,  ///< always extract; throw ImpureBlockStructure if A is not B (+) B^*
    Skip,
};

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kBlockTolerance = 1e-8;

ComplexForm build_complex_form(const GaussianState &state, PureExtraction mode = PureExtraction::Auto);

/// Recomputes alpha, gamma (and gamma_bar) and pvac of `form` for new
/// quadrature means; the covariance-derived parts are kept.
void update_means(ComplexForm &form, const RVector &means, double hbar);

/// V = T + W with T = (hbar/2) S S^T pure and W = S (D - hbar/2) S^T >= 0.
struct WilliamsonSplit {
    RMatrix t;
    RMatrix w;
    RMatrix s;
    RVector nu;
};

WilliamsonSplit williamson(const GaussianState &state);

/// Quadrature indices (q block then p block) of the given modes.
std::vector<int> quadrature_indices(std::span<const int> modes, int total_modes);

/// Heterodyne outcomes as quadratures: mu = sqrt(2 hbar) (Re alpha ; Im alpha).
RVector amplitudes_to_quadratures(std::span<const std::complex<double>> alpha, double hbar);

/// Outcome-independent part of conditioning `state` on heterodyne results
/// of `measured`: the kept-mode covariance and the gain that maps an
/// outcome innovation to the kept means.
class HeterodyneConditioner {
  public:
    HeterodyneConditioner(const GaussianState &state, std::vector<int> measured);

    const std::vector<int> &kept() const { return kept_; }
    const std::vector<int> &measured() const { return measured_; }
    const RMatrix &conditional_cov() const { return cond_cov_; }

    /// R_A + V_AB (V_BB + hbar/2)^-1 (mu_B - R_B)
    RVector conditional_means(const RVector &means, const RVector &mu_measured) const;

  private:
    std::vector<int> kept_;
    std::vector<int> measured_;
    std::vector<int> kept_quads_;
    std::vector<int> measured_quads_;
    RMatrix cond_cov_;
    RMatrix gain_;
};

GaussianState condition_on_heterodyne(const GaussianState &state, std::span<const int> measured,
                                      std::span<const std::complex<double>> outcome);

/// Haar-random unitary from the QR decomposition of a complex Ginibre
/// matrix with the phases of R's diagonal divided out.
CMatrix haar_unitary(int modes, std::uint64_t seed);

/// Single-mode squeezers, then the interferometer, then per-mode pure loss,
/// with quadrature means set from the displacement amplitudes.
GaussianState prepare_gbs_state(std::span<const double> squeezing, const CMatrix &interferometer,
                                std::span<const double> transmission,
                                std::span<const std::complex<double>> displacement, double hbar = kDefaultHbar);

/// Total mean photon number (tr V / hbar - m)/2 + |R|^2 / (2 hbar).
double mean_photon(const GaussianState &state);

}  // namespace gbs
