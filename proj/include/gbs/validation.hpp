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
#include <string>
#include <vector>

#include "gbs/gaussian_state.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/probabilities.hpp"
#include "gbs/rng.hpp"

namespace gbs {

/// Exact probabilities of every pattern with s_i <= cutoff, renormalised
/// over that truncated set. Pattern index is mixed-radix with mode 0 as the
/// least significant digit.
struct PatternDistribution {
    int modes = 0;
    int cutoff = 0;
    std::vector<double> probabilities;
    double enumerated_mass = 0.0;  ///< sum before renormalisation

    std::size_t index_of(const PhotonPattern &pattern) const;
    PhotonPattern pattern_at(std::size_t index) const;
};

/// Guard on (cutoff+1)^modes: at most 2^20 patterns.
inline constexpr double kMaxPatternBits = 20.0;

PatternDistribution enumerate_distribution(const GaussianState &state, int cutoff, const KernelOptions &kernel = {},
                                           int threads = 0);

/// Categorical sampling from the enumerated distribution. Shares nothing
/// with the chain sampler below the probability layer.
std::vector<PhotonPattern> brute_force_sampler(const PatternDistribution &dist, std::size_t count, CounterRng &rng);
std::vector<PhotonPattern> brute_force_sampler(const GaussianState &state, int cutoff, std::size_t count,
                                               CounterRng &rng);

/// Half the L1 distance between empirical frequencies and `dist`.
double total_variation(const PatternDistribution &dist, const std::vector<PhotonPattern> &samples);
double total_variation(std::span<const double> p, std::span<const double> q);

double mean(const std::vector<double> &values);
double sample_stddev(const std::vector<double> &values);

struct TvdConfig {
    int modes = 4;
    double squeezing = 0.5;
    int cutoff = 6;
    std::size_t samples = 200000;
    int unitaries = 10;
    std::uint64_t seed = 1;          ///< sampling seed
    std::uint64_t unitary_seed = 1;  ///< Haar unitaries; independent of `seed`
    double transmission = 1.0;
    std::complex<double> displacement{0.0, 0.0};
    double hbar = kDefaultHbar;
    int threads = 0;
    KernelOptions kernel{Precision::Double};
};

struct TvdReport {
    TvdConfig config;
    std::vector<std::uint64_t> unitary_seeds;
    std::vector<std::uint64_t> sample_seeds;
    std::vector<double> tvd_chain;
    std::vector<double> tvd_brute;
    std::vector<double> enumerated_mass;
    double mean_chain = 0.0, std_chain = 0.0;
    double mean_brute = 0.0, std_brute = 0.0;
};

TvdReport run_tvd_experiment(const TvdConfig &config);

/// T(n): number of involutions of n elements, by T(n) = T(n-1) + (n-1) T(n-2)
/// in arbitrary precision. Returned as a decimal string.
std::string telephone_number(int n);
long double telephone_number_ld(int n);

struct AccuracyReport {
    Precision precision = Precision::Double;
    std::vector<int> dims;
    std::vector<long double> values;
    std::vector<std::string> exact;
    std::vector<double> rel_err;
};

AccuracyReport run_accuracy_experiment(const std::vector<int> &dims, Precision precision, int threads = 0);

struct TimingReport {
    std::vector<int> dims;
    std::vector<double> median_seconds;
    std::vector<std::complex<double>> values;
    int trials = 3;
    int threads = 0;
    Precision precision = Precision::Extended;
    std::string machine;
};

/// Random complex symmetric matrix with real and imaginary parts drawn
/// uniformly from [0, 1) and then symmetrised.
CMatrix random_symmetric_uniform(int n, std::uint64_t seed);

TimingReport run_timing_experiment(const std::vector<int> &dims, int trials, int threads,
                                   Precision precision = Precision::Extended, std::uint64_t seed = 7);

std::string machine_descriptor();

}  // namespace gbs
