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

#include "gbs/sampler.hpp"

#include <numeric>
#include <random>
#include <string>

#include <omp.h>

#include "gbs/error.hpp"

namespace gbs {

namespace {

constexpr double kSingularEigenvalue = 1e-10;
constexpr double kNegativeEigenvalue = 1e-8;
constexpr double kMinimumMass = 1e-300;

int categorical(const std::vector<double> &weights, double total, CounterRng &rng) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) last_positive = static_cast<int>(i);
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return last_positive;
}

}  // namespace

MultivariateNormal::MultivariateNormal(const RMatrix &cov) {
    if (cov.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<RMatrix> es(cov);
    const double smallest = es.eigenvalues().minCoeff();
    if (smallest < -kNegativeEigenvalue)
        throw Error(ErrorCode::NotPSD, "covariance has eigenvalue " + std::to_string(smallest));
    if (smallest >= kSingularEigenvalue) {
        Eigen::LLT<RMatrix> llt(cov);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            return;
        }
    }
    factor_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

RVector MultivariateNormal::draw(const RVector &mean, CounterRng &rng) const {
    if (factor_.size() == 0) return mean;
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector z(factor_.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    return mean + factor_ * z;
}

RVector sample_multivariate_normal(const RVector &mean, const RMatrix &cov, CounterRng &rng) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw Error(ErrorCode::DimensionMismatch, "mean and covariance sizes differ");
    return MultivariateNormal(cov).draw(mean, rng);
}

std::vector<std::complex<double>> sample_heterodyne_joint(const GaussianState &state, std::span<const int> modes,
                                                          CounterRng &rng) {
    const int m = state.modes();
    for (int mode : modes)
        if (mode < 0 || mode >= m) throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode) + " out of range");
    const std::vector<int> idx = quadrature_indices(modes, m);
    const auto n = static_cast<Eigen::Index>(idx.size());
    RMatrix cov(n, n);
    RVector mean(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mean(i) = state.means()(idx[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = state.cov()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        cov(i, i) += state.hbar() / 2.0;
    }
    const RVector mu = MultivariateNormal(cov).draw(mean, rng);
    const auto b = static_cast<Eigen::Index>(modes.size());
    const double scale = 1.0 / std::sqrt(2.0 * state.hbar());
    std::vector<std::complex<double>> alpha(modes.size());
    for (Eigen::Index k = 0; k < b; ++k) alpha[static_cast<std::size_t>(k)] = {mu(k) * scale, mu(b + k) * scale};
    return alpha;
}

ChainSampler::ChainSampler(const GaussianState &state, SamplerConfig config)
    : config_(std::move(config)), modes_(state.modes()), hbar_(state.hbar()), pure_(state.is_pure()),
      means_(state.means()) {
    if (config_.cutoff < 1) throw Error(ErrorCode::InvalidArgument, "cutoff must be at least 1");

    RMatrix pure_cov = state.cov();
    if (!pure_) {
        WilliamsonSplit split = williamson(state);
        pure_cov = split.t;
        classical_ = MultivariateNormal(split.w);
    }
    const GaussianState purified = GaussianState::make(pure_cov, RVector::Zero(2 * modes_), hbar_);

    const int m = modes_;
    if (m > 1) {
        RMatrix het(2 * (m - 1), 2 * (m - 1));
        std::vector<int> rest(static_cast<std::size_t>(m - 1));
        std::iota(rest.begin(), rest.end(), 1);
        const std::vector<int> idx = quadrature_indices(rest, m);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j)
                het(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pure_cov(idx[i], idx[j]);
        het.diagonal().array() += hbar_ / 2.0;
        heterodyne_ = MultivariateNormal(het);
    }

    // Step k keeps modes 0..k-1 and conditions on modes k..m-1.
    steps_.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        std::vector<int> measured;
        for (int j = k; j < m; ++j) measured.push_back(j);
        HeterodyneConditioner cond(purified, measured);
        const GaussianState cond_state =
            GaussianState::make(cond.conditional_cov(), RVector::Zero(2 * k), hbar_);
        steps_.push_back(Step{std::move(cond), build_complex_form(cond_state, PureExtraction::Require)});
    }
}

Sample ChainSampler::draw(std::uint64_t index) const {
    const int m = modes_;
    const int d = config_.cutoff;

    CounterRng classical_rng(config_.seed, index, kStageClassical);
    CounterRng heterodyne_rng(config_.seed, index, kStageHeterodyne);
    CounterRng categorical_rng(config_.seed, index, kStageCategorical);

    // 1. purification: random means of the pure component
    const RVector means = pure_ ? means_ : classical_.draw(means_, classical_rng);

    // 2. joint heterodyne outcome of modes 2..m, as quadratures (q_2..q_m, p_2..p_m)
    RVector mu;
    if (m > 1) {
        RVector het_mean(2 * (m - 1));
        het_mean << means.segment(1, m - 1), means.segment(m + 1, m - 1);
        mu = heterodyne_.draw(het_mean, heterodyne_rng);
    }

    Sample sample;
    std::vector<int> counts;
    counts.reserve(static_cast<std::size_t>(m));
    sample.mode_mass.reserve(static_cast<std::size_t>(m));
    int running = 0;
    for (int k = 1; k <= m; ++k) {
        const Step &step = steps_[static_cast<std::size_t>(k - 1)];
        // 3. conditional pure state of modes 1..k given alpha_{k+1..m}
        const int rest = m - k;
        RVector mu_b(2 * rest);
        if (rest > 0) mu_b << mu.segment(k - 1, rest), mu.segment((m - 1) + k - 1, rest);
        ComplexForm form = step.form;
        update_means(form, step.conditioner.conditional_means(means, mu_b), hbar_);

        // 4. p(s_k, s_{k-1}*, ..., s_1* | alpha*) for s_k = 0..d
        int dim = 0;
        const std::vector<double> weights = conditional_pure_probabilities(form, d, counts, config_.kernel, &dim);
        sample.max_kernel_dim = std::max(sample.max_kernel_dim, dim);
        const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(mass >= kMinimumMass))
            throw Error(ErrorCode::CutoffMassTooSmall,
                        "conditional mass " + std::to_string(mass) + " at mode " + std::to_string(k));
        sample.mode_mass.push_back(mass);

        // 5. draw s_k; 6. alpha_{k+1} is dropped by the next step's conditioning
        const int s = categorical(weights, mass, categorical_rng);
        counts.push_back(s);
        running += s;
        if (s == d) sample.clamped = true;
        if (config_.max_photons && running > *config_.max_photons)
            throw Error(ErrorCode::TooLarge, "sample exceeded the photon limit of " + std::to_string(*config_.max_photons));
    }
    if (config_.threshold)
        for (int &s : counts) s = std::min(s, 1);
    sample.pattern = PhotonPattern(std::move(counts));
    return sample;
}

Sample generate_sample(const GaussianState &state, const SamplerConfig &config, std::uint64_t index) {
    return ChainSampler(state, config).draw(index);
}

std::vector<Sample> generate_batch(const GaussianState &state, const SamplerConfig &config, std::size_t count,
                                   int threads) {
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
    const ChainSampler sampler(state, config);
    std::vector<Sample> out(count);
    const auto n = static_cast<std::int64_t>(count);
    const int width = threads > 0 ? threads : omp_get_max_threads();

    std::int64_t failed_at = n;
    std::string failure;
    ErrorCode failure_code = ErrorCode::InvalidArgument;
#pragma omp parallel for schedule(dynamic, 64) num_threads(width)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = sampler.draw(static_cast<std::uint64_t>(i));
        } catch (const Error &e) {
#pragma omp critical(gbs_batch_failure)
            if (i < failed_at) {
                failed_at = i;
                failure = e.what();
                failure_code = e.code();
            }
        }
    }
    if (failed_at < n) throw Error(failure_code, "sample " + std::to_string(failed_at) + ": " + failure);
    return out;
}

}  // namespace gbs
