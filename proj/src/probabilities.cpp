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

#include "gbs/probabilities.hpp"

#include <cmath>
#include <string>

#include "gbs/error.hpp"

namespace gbs {

namespace {

double factorial_product(const std::vector<int> &counts) {
    double out = 1.0;
    for (int s : counts)
        for (int k = 2; k <= s; ++k) out *= k;
    return out;
}

void check_modes(const PhotonPattern &pattern, Eigen::Index modes) {
    if (pattern.modes() != modes)
        throw Error(ErrorCode::DimensionMismatch, "pattern has " + std::to_string(pattern.modes()) +
                                                      " entries but the state has " + std::to_string(modes) + " modes");
}

bool displaced(const ComplexForm &form) { return form.alpha.size() > 0 && form.alpha.cwiseAbs().maxCoeff() > 0.0; }

void finish(ProbabilityResult &result, double raw) {
    if (!std::isfinite(raw)) throw Error(ErrorCode::NonFinite, "probability is not finite");
    if (raw < 0.0) {
        if (raw < -kNegativeSlack)
            throw Error(ErrorCode::NegativeProbability, "probability evaluated to " + std::to_string(raw));
        result.clamped = true;
        raw = 0.0;
    }
    result.value = raw;
}

}  // namespace

PhotonPattern::PhotonPattern(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int s : counts_) {
        if (s < 0) throw Error(ErrorCode::InvalidArgument, "photon counts must be non-negative");
        total_ += s;
    }
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::MixedHaf: return "mixed-haf";
    case Regime::PureHaf: return "pure-haf";
    case Regime::MixedLhaf: return "mixed-lhaf";
    case Regime::PureLhaf: return "pure-lhaf";
    }
    return "mixed-haf";
}

ProbabilityResult probability_mixed(const ComplexForm &form, const PhotonPattern &pattern, const KernelOptions &kernel) {
    const auto m = form.a.rows() / 2;
    check_modes(pattern, m);
    std::vector<int> mult(static_cast<std::size_t>(2 * m));
    for (Eigen::Index i = 0; i < m; ++i)
        mult[static_cast<std::size_t>(i)] = mult[static_cast<std::size_t>(i + m)] = pattern[static_cast<std::size_t>(i)];

    ProbabilityResult result;
    result.regime = displaced(form) ? Regime::MixedLhaf : Regime::MixedHaf;
    result.expanded_dim = 2 * pattern.total();
    if (pattern.total() == 0) {
        result.value = form.pvac;
        return result;
    }
    const LHafInput input = reduce_by_pattern(form.a, form.gamma, mult, true);
    const std::complex<double> lhaf = loop_hafnian_fast(input, kernel);
    finish(result, form.pvac * lhaf.real() / factorial_product(pattern.counts()));
    return result;
}

ProbabilityResult probability_mixed(const GaussianState &state, const PhotonPattern &pattern,
                                    const KernelOptions &kernel) {
    check_modes(pattern, state.modes());
    return probability_mixed(build_complex_form(state, PureExtraction::Skip), pattern, kernel);
}

ProbabilityResult probability_pure(const ComplexForm &form, const PhotonPattern &pattern, const KernelOptions &kernel) {
    if (!form.pure)
        throw Error(ErrorCode::ImpureBlockStructure, "pure-state probability requested for a form without B");
    check_modes(pattern, form.b.rows());

    ProbabilityResult result;
    result.regime = displaced(form) ? Regime::PureLhaf : Regime::PureHaf;
    result.expanded_dim = pattern.total();
    if (pattern.total() == 0) {
        result.value = form.pvac;
        return result;
    }
    const LHafInput input = reduce_by_pattern(form.b, form.gamma_bar, pattern.counts(), true);
    const std::complex<double> lhaf = loop_hafnian_fast(input, kernel);
    finish(result, form.pvac * std::norm(lhaf) / factorial_product(pattern.counts()));
    return result;
}

ProbabilityResult probability(const GaussianState &state, const PhotonPattern &pattern, const KernelOptions &kernel) {
    check_modes(pattern, state.modes());
    if (state.is_pure()) return probability_pure(build_complex_form(state, PureExtraction::Require), pattern, kernel);
    return probability_mixed(build_complex_form(state, PureExtraction::Skip), pattern, kernel);
}

std::vector<double> conditional_pure_probabilities(const ComplexForm &form, int cutoff, std::span<const int> fixed,
                                                   const KernelOptions &kernel, int *max_dim) {
    if (cutoff < 0) throw Error(ErrorCode::InvalidArgument, "cutoff must be non-negative");
    if (static_cast<Eigen::Index>(fixed.size()) + 1 != form.b.rows())
        throw Error(ErrorCode::DimensionMismatch, "fixed pattern must cover all but the last mode");
    std::vector<int> counts(fixed.begin(), fixed.end());
    counts.push_back(0);
    std::vector<double> out(static_cast<std::size_t>(cutoff) + 1);
    int largest = 0;
    for (int s = 0; s <= cutoff; ++s) {
        counts.back() = s;
        const ProbabilityResult r = probability_pure(form, PhotonPattern(counts), kernel);
        out[static_cast<std::size_t>(s)] = r.value;
        largest = std::max(largest, r.expanded_dim);
    }
    if (max_dim) *max_dim = largest;
    return out;
}

std::vector<double> conditional_pure_probabilities(const GaussianState &state, int cutoff,
                                                   std::span<const int> fixed, const KernelOptions &kernel) {
    return conditional_pure_probabilities(build_complex_form(state, PureExtraction::Require), cutoff, fixed, kernel);
}

}  // namespace gbs
