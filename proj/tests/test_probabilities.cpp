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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gbs/error.hpp"
#include "gbs/probabilities.hpp"
#include "support.hpp"

using namespace gbs;
using namespace gbs::testing;
using cd = std::complex<double>;

namespace {

struct OracleRow {
    std::vector<int> pattern;
    double p;
};

// Reference values from tests/oracles/fock_oracle.py (truncated Fock space).
// single mode, r=0.5, alpha=0.3+0.4i
const OracleRow kDisplacedSqueezed[] = {
    {{0}, 7.133619768698489e-01},
    {{1}, 1.702735578227916e-01},
    {{2}, 4.832534322963257e-02},
    {{3}, 4.466345543264982e-02},
    {{4}, 7.970423742326717e-03},
    {{5}, 9.913958885323780e-03},
};

// single mode, r=0.5, eta=0.5
const OracleRow kLossySqueezed[] = {
    {{0}, 9.114837804462478e-01},
    {{1}, 5.140687034562978e-02},
    {{2}, 3.005238746701574e-02},
    {{3}, 4.757747329876750e-03},
    {{4}, 1.740778057521475e-03},
    {{5}, 3.913871438843149e-04},
};

// single mode, r=0.4, eta=0.7, alpha=0.2-0.3i
const OracleRow kLossyDisplaced[] = {
    {{0}, 8.319786865141446e-01},
    {{1}, 1.132924632031345e-01},
    {{2}, 3.712749587109566e-02},
    {{3}, 1.243433752383843e-02},
    {{4}, 3.383940458097510e-03},
};

// two modes, r=(0.5,0.3), beamsplitter(0.6,0.9), alpha=(0.2+0.1i,-0.15i)
const OracleRow kTwoModeDisplaced[] = {
    {{0, 0}, 7.997801440998766e-01},
    {{0, 1}, 4.723976274714369e-03},
    {{0, 2}, 2.011496916943124e-02},
    {{0, 3}, 3.445562226656894e-04},
    {{1, 0}, 3.762277155403908e-02},
    {{1, 1}, 6.853732526527849e-02},
    {{1, 2}, 2.645050022434230e-03},
    {{1, 3}, 5.161523505366670e-03},
    {{2, 0}, 3.109488528452152e-02},
    {{2, 1}, 4.088141396313002e-03},
    {{2, 2}, 3.038538525384626e-03},
    {{2, 3}, 5.673285517295938e-04},
    {{3, 0}, 4.987724610381732e-03},
    {{3, 1}, 7.989534674446531e-03},
    {{3, 2}, 1.022339162460770e-04},
    {{3, 3}, 1.851667306376423e-04},
};

// two modes, r=(0.5,0.3), beamsplitter(0.6,0.9), eta=(0.8,0.6)
const OracleRow kTwoModeLossy[] = {
    {{0, 0}, 8.586367110507687e-01},
    {{0, 1}, 1.817982703053538e-02},
    {{0, 2}, 8.030268327023596e-03},
    {{0, 3}, 4.937724163647075e-04},
    {{1, 0}, 3.486165814163874e-02},
    {{1, 1}, 3.396072293757196e-02},
    {{1, 2}, 2.123328074004126e-03},
    {{1, 3}, 9.769766119281434e-04},
    {{2, 0}, 2.788569625306407e-02},
    {{2, 1}, 3.279564215781133e-03},
    {{2, 2}, 9.325901863251264e-04},
    {{2, 3}, 1.722462828954562e-04},
    {{3, 0}, 3.281640211467968e-03},
    {{3, 1}, 3.305315502352778e-03},
    {{3, 2}, 2.688521066694438e-04},
    {{3, 3}, 6.621454539366216e-05},
};

double pmix(const GaussianState &s, std::vector<int> pattern) {
    return probability_mixed(s, PhotonPattern(std::move(pattern))).value;
}

double ppure(const GaussianState &s, std::vector<int> pattern) {
    return probability_pure(build_complex_form(s, PureExtraction::Require), PhotonPattern(std::move(pattern))).value;
}

GaussianState two_mode_case(std::vector<double> eta, std::vector<cd> alpha) {
    const double th = 0.6, ph = 0.9;
    CMatrix u(2, 2);
    u << std::cos(th), -std::exp(cd(0, -ph)) * std::sin(th), std::exp(cd(0, ph)) * std::sin(th), std::cos(th);
    const std::vector<double> r{0.5, 0.3};
    return prepare_gbs_state(r, u, eta, alpha);
}

void check_table(const GaussianState &s, std::span<const OracleRow> rows, bool pure_route) {
    for (const auto &row : rows) {
        CAPTURE(row.pattern);
        CHECK(std::abs(pmix(s, row.pattern) - row.p) < 1e-10);
        if (pure_route) CHECK(std::abs(ppure(s, row.pattern) - row.p) < 1e-10);
    }
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("vacuum") {
    const GaussianState vac = GaussianState::vacuum(3);
    CHECK(pmix(vac, {0, 0, 0}) == 1.0);
    CHECK(ppure(vac, {0, 0, 0}) == 1.0);
    CHECK(pmix(vac, {1, 0, 0}) == 0.0);
    CHECK(ppure(vac, {0, 2, 1}) == 0.0);
}

TEST_CASE("single-mode squeezed vacuum") {
    const double r = 0.5;
    const GaussianState s = single_mode(r);
    CHECK(std::abs(pmix(s, {1})) < 1e-12);
    CHECK(std::abs(pmix(s, {3})) < 1e-12);
    CHECK(ppure(s, {2}) / ppure(s, {0}) == doctest::Approx(std::pow(std::tanh(r), 2) / 2).epsilon(1e-13));
    for (int n = 0; n <= 5; ++n) {
        // p(2n) = (2n)! / (2^n n!)^2 tanh^{2n} r / cosh r
        const double want =
            factorial(2 * n) / std::pow(std::pow(2.0, n) * factorial(n), 2) * std::pow(std::tanh(r), 2 * n) / std::cosh(r);
        CHECK(pmix(s, {2 * n}) == doctest::Approx(want).epsilon(1e-12));
        CHECK(ppure(s, {2 * n}) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("thermal state is geometric") {
    const GaussianState th = thermal(1, 1.0);
    CHECK(pmix(th, {0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pmix(th, {1}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(pmix(th, {2}) == doctest::Approx(0.125).epsilon(1e-14));
    const GaussianState th2 = thermal(2, 0.3);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            const double want = std::pow(0.3, a + b) / std::pow(1.3, a + b + 2);
            CHECK(pmix(th2, {a, b}) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("coherent state is Poisson") {
    const cd alpha[] = {cd(1.0, 0.0)};
    const GaussianState c = coherent(alpha);
    for (int n = 0; n <= 4; ++n) {
        const double want = std::exp(-1.0) / factorial(n);
        CHECK(pmix(c, {n}) == doctest::Approx(want).epsilon(1e-13));
        CHECK(ppure(c, {n}) == doctest::Approx(want).epsilon(1e-13));
    }
    const ProbabilityResult r = probability_mixed(c, PhotonPattern({2}));
    CHECK(r.regime == Regime::MixedLhaf);
    CHECK(r.expanded_dim == 4);
}

TEST_CASE("two-mode squeezed vacuum") {
    const double r = 0.5;
    const GaussianState s = two_mode_squeezed(r);
    REQUIRE(s.is_pure());
    for (int n = 0; n <= 2; ++n)
        for (int k = 0; k <= 2; ++k) {
            const double want = n == k ? std::pow(std::tanh(r), 2 * n) / std::pow(std::cosh(r), 2) : 0.0;
            CHECK(std::abs(ppure(s, {n, k}) - want) < 1e-13);
            CHECK(std::abs(pmix(s, {n, k}) - want) < 1e-13);
        }
}

TEST_CASE("Fock-space oracle tables") {
    SUBCASE("displaced squeezed") { check_table(single_mode(0.5, 1.0, cd(0.3, 0.4)), kDisplacedSqueezed, true); }
    SUBCASE("lossy squeezed") { check_table(single_mode(0.5, 0.5), kLossySqueezed, false); }
    SUBCASE("lossy displaced squeezed") { check_table(single_mode(0.4, 0.7, cd(0.2, -0.3)), kLossyDisplaced, false); }
    SUBCASE("two modes, displaced") {
        check_table(two_mode_case({1.0, 1.0}, {cd(0.2, 0.1), cd(0.0, -0.15)}), kTwoModeDisplaced, true);
    }
    SUBCASE("two modes, lossy") { check_table(two_mode_case({0.8, 0.6}, {cd(0), cd(0)}), kTwoModeLossy, false); }
}

TEST_CASE("regime tags") {
    const GaussianState sq = single_mode(0.5);
    CHECK(probability_mixed(sq, PhotonPattern({2})).regime == Regime::MixedHaf);
    CHECK(probability(sq, PhotonPattern({2})).regime == Regime::PureHaf);
    CHECK(probability(sq, PhotonPattern({2})).expanded_dim == 2);
    const GaussianState dsq = single_mode(0.5, 1.0, cd(0.1, 0.0));
    CHECK(probability(dsq, PhotonPattern({2})).regime == Regime::PureLhaf);
    CHECK(to_string(Regime::MixedLhaf) == "mixed-lhaf");
}

TEST_CASE("pure and mixed routes agree") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int m = 1 + static_cast<int>(seed % 3);
        const GaussianState s = random_state(m, 300 + seed, false, seed % 2);
        const ComplexForm f = build_complex_form(s, PureExtraction::Require);
        std::mt19937_64 engine(seed);
        std::vector<int> counts(static_cast<std::size_t>(m));
        int total = 0;
        for (auto &c : counts) {
            c = static_cast<int>(engine() % 4);
            total += c;
        }
        if (total > 8) continue;
        const double a = probability_mixed(f, PhotonPattern(counts)).value;
        const double b = probability_pure(f, PhotonPattern(counts)).value;
        // Parity-forbidden patterns are zero up to roundoff in both routes.
        CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-15);
    }
}

TEST_CASE("zero displacement gives a zero diagonal") {
    const GaussianState s = random_state(3, 8, true, false);
    const ComplexForm f = build_complex_form(s);
    CHECK(f.gamma.norm() == 0.0);
    const int mult[] = {1, 2, 0, 1, 2, 0};
    const LHafInput with = reduce_by_pattern(f.a, f.gamma, mult, true);
    const LHafInput without = reduce_by_pattern(f.a, f.gamma, mult, false);
    CHECK(loop_hafnian_fast(with) == loop_hafnian_fast(without));
}

TEST_CASE("permuting modes permutes patterns") {
    const GaussianState s = random_state(3, 41, true, true);
    const int perm[] = {2, 0, 1};
    RMatrix p = RMatrix::Zero(6, 6);
    for (int i = 0; i < 3; ++i) {
        p(i, perm[i]) = 1;
        p(3 + i, 3 + perm[i]) = 1;
    }
    const GaussianState t = GaussianState::make(p * s.cov() * p.transpose(), p * s.means());
    const std::vector<std::vector<int>> patterns{{1, 0, 2}, {2, 2, 0}, {0, 1, 1}, {3, 0, 1}};
    for (const auto &pat : patterns) {
        std::vector<int> moved(3);
        for (int i = 0; i < 3; ++i) moved[static_cast<std::size_t>(i)] = pat[static_cast<std::size_t>(perm[i])];
        const double a = pmix(s, pat), b = pmix(t, moved);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(a, 1e-300));
    }
}

TEST_CASE("normalization of low-energy states") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const int m = 1 + static_cast<int>(seed % 2);
        const GaussianState s = random_state(m, 900 + seed, seed % 3 == 0, seed % 2, 0.3);
        if (mean_photon(s) / m > 0.3) continue;
        double total = 0.0;
        std::vector<int> counts(static_cast<std::size_t>(m), 0);
        const int d = 8;
        for (int idx = 0; idx < static_cast<int>(std::pow(d + 1, m)); ++idx) {
            int rest = idx;
            for (auto &c : counts) {
                c = rest % (d + 1);
                rest /= d + 1;
            }
            total += probability(s, PhotonPattern(counts)).value;
        }
        CHECK(total >= 0.999);
        CHECK(total <= 1.0 + 1e-9);
    }
}

TEST_CASE("conditional pure probabilities") {
    SUBCASE("vacuum") {
        const auto v = conditional_pure_probabilities(GaussianState::vacuum(1), 5, {});
        CHECK(v[0] == doctest::Approx(1.0));
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] == 0.0);
    }
    SUBCASE("squeezed parity") {
        const auto v = conditional_pure_probabilities(single_mode(0.5), 6, {});
        for (int s = 1; s <= 6; s += 2) CHECK(std::abs(v[static_cast<std::size_t>(s)]) < 1e-12);
        for (double x : v) CHECK(x >= -1e-12);
    }
    SUBCASE("bounded by the marginal") {
        const GaussianState s = random_state(3, 61, false, true, 0.5);
        const ComplexForm f = build_complex_form(s, PureExtraction::Require);
        const int fixed[] = {1, 0};
        int max_dim = 0;
        const auto v = conditional_pure_probabilities(f, 6, fixed, {}, &max_dim);
        CHECK(max_dim == 7);
        double marginal = 0.0;
        for (int s3 = 0; s3 <= 20; ++s3) marginal += probability_pure(f, PhotonPattern({1, 0, s3})).value;
        CHECK(std::accumulate(v.begin(), v.end(), 0.0) <= marginal + 1e-9);
        CHECK(v[2] == doctest::Approx(probability_pure(f, PhotonPattern({1, 0, 2})).value));
    }
    SUBCASE("shape errors") {
        const ComplexForm f = build_complex_form(random_state(2, 3, false, false), PureExtraction::Require);
        const int fixed[] = {1, 1};
        CHECK_THROWS_AS(conditional_pure_probabilities(f, 4, fixed), Error);
    }
}

TEST_CASE("errors") {
    const GaussianState s = random_state(2, 4, true, false);
    try {
        pmix(s, {1});
        FAIL("expected DimensionMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK_THROWS_AS(PhotonPattern({1, -1}), Error);
    try {
        probability_pure(build_complex_form(s), PhotonPattern({1, 1}));
        FAIL("expected ImpureBlockStructure");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ImpureBlockStructure);
    }
}
