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

#include "gbs/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gbs/error.hpp"

namespace gbs {

namespace {

using cd = std::complex<double>;

CMatrix f_matrix(int m, double hbar) {
    const double scale = 1.0 / std::sqrt(2.0 * hbar);
    CMatrix f = CMatrix::Zero(2 * m, 2 * m);
    const cd i(0.0, 1.0);
    for (int k = 0; k < m; ++k) {
        f(k, k) = scale;
        f(k, m + k) = i * scale;
        f(m + k, k) = scale;
        f(m + k, m + k) = -i * scale;
    }
    return f;
}

CMatrix swap_halves(int m) {
    CMatrix x = CMatrix::Zero(2 * m, 2 * m);
    x.topRightCorner(m, m).setIdentity();
    x.bottomLeftCorner(m, m).setIdentity();
    return x;
}

RMatrix select(const RMatrix &v, const std::vector<int> &rows, const std::vector<int> &cols) {
    RMatrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v(rows[r], cols[c]);
    return out;
}

RVector select(const RVector &v, const std::vector<int> &idx) {
    RVector out(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out(static_cast<Eigen::Index>(r)) = v(idx[r]);
    return out;
}

}  // namespace

RMatrix symplectic_form(int modes) {
    RMatrix omega = RMatrix::Zero(2 * modes, 2 * modes);
    omega.topRightCorner(modes, modes).setIdentity();
    omega.bottomLeftCorner(modes, modes) = -RMatrix::Identity(modes, modes);
    return omega;
}

double min_uncertainty_eigenvalue(const RMatrix &cov, double hbar) {
    const int m = static_cast<int>(cov.rows() / 2);
    CMatrix h = cov.cast<cd>() + cd(0.0, hbar / 2.0) * symplectic_form(m).cast<cd>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

GaussianState GaussianState::make(RMatrix cov, RVector means, double hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
    if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0)
        throw Error(ErrorCode::DimensionMismatch, "covariance must be a non-empty 2m x 2m matrix");
    if (means.size() != cov.rows())
        throw Error(ErrorCode::DimensionMismatch,
                    "means have length " + std::to_string(means.size()) + ", expected " + std::to_string(cov.rows()));
    if (!cov.allFinite() || !means.allFinite()) throw Error(ErrorCode::NonFinite, "state has non-finite entries");

    const double scale = cov.cwiseAbs().maxCoeff();
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(ErrorCode::NotSymmetric, "covariance matrix is not symmetric");
    cov = (0.5 * (cov + cov.transpose())).eval();

    const double min_eig = min_uncertainty_eigenvalue(cov, hbar);
    if (min_eig < -kPhysicalTolerance)
        throw Error(ErrorCode::Unphysical,
                    "covariance violates V + i(hbar/2)Omega >= 0 (smallest eigenvalue " + std::to_string(min_eig) + ")");

    Eigen::SelfAdjointEigenSolver<RMatrix> es(cov, Eigen::EigenvaluesOnly);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) log_det += std::log(2.0 * es.eigenvalues()(i) / hbar);
    return GaussianState(std::move(cov), std::move(means), hbar, std::exp(log_det));
}

GaussianState GaussianState::vacuum(int modes, double hbar) {
    if (modes < 1) throw Error(ErrorCode::InvalidArgument, "mode count must be positive");
    return make(RMatrix::Identity(2 * modes, 2 * modes) * (hbar / 2.0), RVector::Zero(2 * modes), hbar);
}

CVector GaussianState::mean_amplitudes() const {
    CVector alpha(modes_);
    const double scale = 1.0 / std::sqrt(2.0 * hbar_);
    for (int k = 0; k < modes_; ++k) alpha(k) = cd(means_(k), means_(modes_ + k)) * scale;
    return alpha;
}

CMatrix to_complex_covariance(const GaussianState &state) {
    const CMatrix f = f_matrix(state.modes(), state.hbar());
    CMatrix sigma = f * state.cov().cast<cd>() * f.adjoint();
    return 0.5 * (sigma + sigma.adjoint());
}

ComplexForm build_complex_form(const GaussianState &state, PureExtraction mode) {
    const int m = state.modes();
    ComplexForm form;
    form.sigma = to_complex_covariance(state);
    form.q = form.sigma + 0.5 * CMatrix::Identity(2 * m, 2 * m);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(form.q);
    const RVector &lambda = es.eigenvalues();
    const double lo = lambda.minCoeff();
    const double hi = lambda.maxCoeff();
    if (!(lo > 0.0) || hi / lo > kConditionLimit)
        throw Error(ErrorCode::NearSingularQ, "condition number of Q exceeds " + std::to_string(kConditionLimit));
    form.q_inv = es.eigenvectors() * lambda.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    form.log_det_q = lambda.array().log().sum();

    // A = X (I - Q^-1)^*. The conjugate pairs A with gamma = Q^-1 alpha; without
    // it the loop weights and the pairing matrix disagree whenever both the
    // displacement and the off-diagonal of B are complex.
    CMatrix a = swap_halves(m) * (CMatrix::Identity(2 * m, 2 * m) - form.q_inv).conjugate();
    form.a = 0.5 * (a + a.transpose());

    const bool extract = mode == PureExtraction::Require || (mode == PureExtraction::Auto && state.is_pure());
    if (extract) {
        const double off = std::max(form.a.topRightCorner(m, m).cwiseAbs().maxCoeff(),
                                    form.a.bottomLeftCorner(m, m).cwiseAbs().maxCoeff());
        const double mirror =
            (form.a.bottomRightCorner(m, m) - form.a.topLeftCorner(m, m).conjugate()).cwiseAbs().maxCoeff();
        if (off > kBlockTolerance || mirror > kBlockTolerance)
            throw Error(ErrorCode::ImpureBlockStructure,
                        "A is not of the form B (+) B* (off-diagonal " + std::to_string(off) + ")");
        form.pure = true;
        form.b = form.a.topLeftCorner(m, m);
    }
    update_means(form, state.means(), state.hbar());
    return form;
}

void update_means(ComplexForm &form, const RVector &means, double hbar) {
    const auto m = means.size() / 2;
    const double scale = 1.0 / std::sqrt(2.0 * hbar);
    form.alpha.resize(2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const cd a(means(k) * scale, means(m + k) * scale);
        form.alpha(k) = a;
        form.alpha(m + k) = std::conj(a);
    }
    form.gamma = form.q_inv * form.alpha;
    const double quad = form.alpha.dot(form.gamma).real();  // alpha^dagger Q^-1 alpha
    form.pvac = std::exp(-0.5 * quad - 0.5 * form.log_det_q);
    if (form.pure) form.gamma_bar = form.gamma.head(m);
}

WilliamsonSplit williamson(const GaussianState &state) {
    const int m = state.modes();
    const double half_hbar = state.hbar() / 2.0;
    Eigen::SelfAdjointEigenSolver<RMatrix> es(state.cov());
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw Error(ErrorCode::NotPositiveDefinite, "covariance matrix is not strictly positive definite");
    const RVector root = es.eigenvalues().cwiseSqrt();
    const RMatrix sqrt_v = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    const RMatrix isqrt_v = es.eigenvectors() * root.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();

    // K = V^-1/2 Omega V^-1/2 is antisymmetric; iK is Hermitian with
    // eigenvalues +-1/nu. Each positive eigenvector u = (x + iy)/sqrt(2)
    // spans the invariant plane in which K acts as [[0, 1/nu], [-1/nu, 0]]
    // on the basis (y, x).
    const RMatrix k = isqrt_v * symplectic_form(m) * isqrt_v;
    const CMatrix ik = cd(0.0, 1.0) * k.cast<cd>();
    Eigen::SelfAdjointEigenSolver<CMatrix> hs(0.5 * (ik + ik.adjoint()));

    RMatrix basis(2 * m, 2 * m);
    RVector nu(m);
    for (int j = 0; j < m; ++j) {
        const double lambda = hs.eigenvalues()(m + j);
        if (!(lambda > 0.0)) throw Error(ErrorCode::Unphysical, "degenerate symplectic spectrum");
        const Eigen::VectorXcd u = hs.eigenvectors().col(m + j);
        basis.col(j) = std::sqrt(2.0) * u.imag();
        basis.col(m + j) = std::sqrt(2.0) * u.real();
        nu(j) = 1.0 / lambda;
        if (nu(j) < half_hbar - kPhysicalTolerance)
            throw Error(ErrorCode::Unphysical,
                        "symplectic eigenvalue " + std::to_string(nu(j)) + " below hbar/2");
    }

    RVector d(2 * m), excess(2 * m);
    for (int j = 0; j < m; ++j) {
        d(j) = d(m + j) = nu(j);
        excess(j) = excess(m + j) = std::max(nu(j) - half_hbar, 0.0);
    }

    WilliamsonSplit split;
    split.s = sqrt_v * basis * d.cwiseSqrt().cwiseInverse().asDiagonal();
    split.nu = nu.cwiseMax(half_hbar);
    split.t = half_hbar * split.s * split.s.transpose();
    split.w = split.s * excess.asDiagonal() * split.s.transpose();
    split.t = (0.5 * (split.t + split.t.transpose())).eval();
    split.w = (0.5 * (split.w + split.w.transpose())).eval();
    return split;
}

std::vector<int> quadrature_indices(std::span<const int> modes, int total_modes) {
    std::vector<int> idx(modes.begin(), modes.end());
    for (int mode : modes) idx.push_back(mode + total_modes);
    return idx;
}

RVector amplitudes_to_quadratures(std::span<const std::complex<double>> alpha, double hbar) {
    const auto n = static_cast<Eigen::Index>(alpha.size());
    const double scale = std::sqrt(2.0 * hbar);
    RVector mu(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        mu(k) = scale * alpha[static_cast<std::size_t>(k)].real();
        mu(n + k) = scale * alpha[static_cast<std::size_t>(k)].imag();
    }
    return mu;
}

HeterodyneConditioner::HeterodyneConditioner(const GaussianState &state, std::vector<int> measured)
    : measured_(std::move(measured)) {
    const int m = state.modes();
    std::vector<char> hit(static_cast<std::size_t>(m), 0);
    for (int mode : measured_) {
        if (mode < 0 || mode >= m)
            throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode) + " outside 0.." + std::to_string(m - 1));
        if (hit[static_cast<std::size_t>(mode)]) throw Error(ErrorCode::InvalidArgument, "mode listed twice");
        hit[static_cast<std::size_t>(mode)] = 1;
    }
    for (int mode = 0; mode < m; ++mode)
        if (!hit[static_cast<std::size_t>(mode)]) kept_.push_back(mode);
    if (kept_.empty()) throw Error(ErrorCode::InvalidArgument, "at least one mode must remain unmeasured");

    kept_quads_ = quadrature_indices(kept_, m);
    measured_quads_ = quadrature_indices(measured_, m);
    const RMatrix v_aa = select(state.cov(), kept_quads_, kept_quads_);
    if (measured_.empty()) {
        cond_cov_ = v_aa;
        gain_ = RMatrix::Zero(v_aa.rows(), 0);
        return;
    }
    const RMatrix v_ab = select(state.cov(), kept_quads_, measured_quads_);
    RMatrix v_bb = select(state.cov(), measured_quads_, measured_quads_);
    v_bb.diagonal().array() += state.hbar() / 2.0;
    Eigen::LLT<RMatrix> llt(v_bb);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::Unphysical, "V_BB + (hbar/2) I is not positive definite");
    gain_ = llt.solve(v_ab.transpose()).transpose();
    const RMatrix cond = v_aa - gain_ * v_ab.transpose();
    cond_cov_ = 0.5 * (cond + cond.transpose());
}

RVector HeterodyneConditioner::conditional_means(const RVector &means, const RVector &mu_measured) const {
    RVector out = select(means, kept_quads_);
    if (!measured_.empty()) out += gain_ * (mu_measured - select(means, measured_quads_));
    return out;
}

GaussianState condition_on_heterodyne(const GaussianState &state, std::span<const int> measured,
                                      std::span<const std::complex<double>> outcome) {
    if (measured.empty()) throw Error(ErrorCode::InvalidArgument, "no modes to condition on");
    if (outcome.size() != measured.size())
        throw Error(ErrorCode::DimensionMismatch, "one heterodyne amplitude per measured mode is required");
    HeterodyneConditioner cond(state, std::vector<int>(measured.begin(), measured.end()));
    const RVector mu = amplitudes_to_quadratures(outcome, state.hbar());
    return GaussianState::make(cond.conditional_cov(), cond.conditional_means(state.means(), mu), state.hbar());
}

CMatrix haar_unitary(int modes, std::uint64_t seed) {
    if (modes < 1) throw Error(ErrorCode::InvalidArgument, "mode count must be positive");
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix z(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) z(i, j) = cd(normal(engine), normal(engine)) / std::sqrt(2.0);
    Eigen::HouseholderQR<CMatrix> qr(z);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(modes, modes);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    CVector phases(modes);
    for (int i = 0; i < modes; ++i) {
        const double mag = std::abs(r(i, i));
        phases(i) = mag > 0.0 ? r(i, i) / mag : cd(1.0, 0.0);
    }
    return q * phases.asDiagonal();
}

GaussianState prepare_gbs_state(std::span<const double> squeezing, const CMatrix &interferometer,
                                std::span<const double> transmission,
                                std::span<const std::complex<double>> displacement, double hbar) {
    const auto m = static_cast<int>(squeezing.size());
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "at least one mode is required");
    if (interferometer.rows() != m || interferometer.cols() != m || static_cast<int>(transmission.size()) != m ||
        static_cast<int>(displacement.size()) != m)
        throw Error(ErrorCode::DimensionMismatch, "squeezing, interferometer, loss and displacement disagree on m");
    const double unitarity =
        (interferometer.adjoint() * interferometer - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
    if (!(unitarity <= 1e-10))
        throw Error(ErrorCode::NotUnitary, "interferometer deviates from unitarity by " + std::to_string(unitarity));
    for (int i = 0; i < m; ++i) {
        const double eta = transmission[static_cast<std::size_t>(i)];
        if (!(eta >= 0.0 && eta <= 1.0))
            throw Error(ErrorCode::TransmissionOutOfRange,
                        "transmission " + std::to_string(eta) + " of mode " + std::to_string(i) + " outside [0, 1]");
        if (!std::isfinite(squeezing[static_cast<std::size_t>(i)]))
            throw Error(ErrorCode::NonFinite, "squeezing must be finite");
    }

    RVector sq(2 * m);
    for (int i = 0; i < m; ++i) {
        sq(i) = std::exp(-2.0 * squeezing[static_cast<std::size_t>(i)]);
        sq(m + i) = std::exp(2.0 * squeezing[static_cast<std::size_t>(i)]);
    }
    RMatrix s_u(2 * m, 2 * m);
    s_u << interferometer.real(), -interferometer.imag(), interferometer.imag(), interferometer.real();
    RMatrix cov = (hbar / 2.0) * s_u * sq.asDiagonal() * s_u.transpose();

    RVector root_eta(2 * m);
    for (int i = 0; i < m; ++i) root_eta(i) = root_eta(m + i) = std::sqrt(transmission[static_cast<std::size_t>(i)]);
    cov = root_eta.asDiagonal() * cov * root_eta.asDiagonal();
    for (int i = 0; i < 2 * m; ++i) cov(i, i) += (hbar / 2.0) * (1.0 - root_eta(i) * root_eta(i));

    return GaussianState::make(std::move(cov), amplitudes_to_quadratures(displacement, hbar), hbar);
}

double mean_photon(const GaussianState &state) {
    const double h = state.hbar();
    return (state.cov().trace() / h - state.modes()) / 2.0 + state.means().squaredNorm() / (2.0 * h);
}

}  // namespace gbs
