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

#include "gbs/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <sys/utsname.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <omp.h>

#include "gbs/error.hpp"
#include "gbs/sampler.hpp"

namespace gbs {

namespace {

using boost::multiprecision::cpp_int;

cpp_int telephone_exact(int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "telephone numbers need n >= 0");
    cpp_int prev = 1, cur = 1;  // T(0), T(1)
    if (n == 0) return prev;
    for (int k = 2; k <= n; ++k) {
        cpp_int next = cur + cpp_int(k - 1) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> empirical(const PatternDistribution &dist, const std::vector<PhotonPattern> &samples) {
    std::vector<double> freq(dist.probabilities.size(), 0.0);
    for (const auto &s : samples) freq[dist.index_of(s)] += 1.0;
    const double n = static_cast<double>(samples.size());
    for (double &f : freq) f /= n;
    return freq;
}

}  // namespace

std::size_t PatternDistribution::index_of(const PhotonPattern &pattern) const {
    if (pattern.modes() != modes) throw Error(ErrorCode::DimensionMismatch, "pattern has the wrong number of modes");
    std::size_t idx = 0;
    for (int i = modes - 1; i >= 0; --i) {
        const int s = pattern[static_cast<std::size_t>(i)];
        if (s > cutoff) throw Error(ErrorCode::IndexOutOfRange, "pattern exceeds the enumerated cutoff");
        idx = idx * static_cast<std::size_t>(cutoff + 1) + static_cast<std::size_t>(s);
    }
    return idx;
}

PhotonPattern PatternDistribution::pattern_at(std::size_t index) const {
    std::vector<int> counts(static_cast<std::size_t>(modes));
    for (int i = 0; i < modes; ++i) {
        counts[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(cutoff + 1));
        index /= static_cast<std::size_t>(cutoff + 1);
    }
    return PhotonPattern(std::move(counts));
}

PatternDistribution enumerate_distribution(const GaussianState &state, int cutoff, const KernelOptions &kernel,
                                           int threads) {
    if (cutoff < 0) throw Error(ErrorCode::InvalidArgument, "cutoff must be non-negative");
    const int m = state.modes();
    if (m * std::log2(cutoff + 1.0) > kMaxPatternBits)
        throw Error(ErrorCode::TooManyPatterns, "(cutoff+1)^modes exceeds 2^20 patterns");

    PatternDistribution dist;
    dist.modes = m;
    dist.cutoff = cutoff;
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(cutoff + 1);
    dist.probabilities.assign(total, 0.0);

    const bool pure = state.is_pure();
    const ComplexForm form = build_complex_form(state, pure ? PureExtraction::Require : PureExtraction::Skip);
    const auto n = static_cast<std::int64_t>(total);
    const int width = threads > 0 ? threads : omp_get_max_threads();

    std::int64_t failed_at = n;
    std::string failure;
    ErrorCode failure_code = ErrorCode::InvalidArgument;
    // Large patterns dominate the cost; walk them first.
#pragma omp parallel for schedule(dynamic, 1) num_threads(width)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto idx = static_cast<std::size_t>(n - 1 - j);
        try {
            const PhotonPattern pattern = dist.pattern_at(idx);
            dist.probabilities[idx] =
                pure ? probability_pure(form, pattern, kernel).value : probability_mixed(form, pattern, kernel).value;
        } catch (const Error &e) {
#pragma omp critical(gbs_enumerate_failure)
            if (j < failed_at) {
                failed_at = j;
                failure = e.what();
                failure_code = e.code();
            }
        }
    }
    if (failed_at < n) throw Error(failure_code, failure);

    dist.enumerated_mass = std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0);
    if (!(dist.enumerated_mass > 0.0)) throw Error(ErrorCode::CutoffMassTooSmall, "enumerated mass is zero");
    for (double &p : dist.probabilities) p /= dist.enumerated_mass;
    return dist;
}

std::vector<PhotonPattern> brute_force_sampler(const PatternDistribution &dist, std::size_t count, CounterRng &rng) {
    std::vector<double> cdf(dist.probabilities.size());
    std::partial_sum(dist.probabilities.begin(), dist.probabilities.end(), cdf.begin());
    const double top = cdf.back();
    std::vector<PhotonPattern> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform() * top;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        out.push_back(dist.pattern_at(static_cast<std::size_t>(it - cdf.begin())));
    }
    return out;
}

std::vector<PhotonPattern> brute_force_sampler(const GaussianState &state, int cutoff, std::size_t count,
                                               CounterRng &rng) {
    return brute_force_sampler(enumerate_distribution(state, cutoff), count, rng);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "distributions differ in support size");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

double total_variation(const PatternDistribution &dist, const std::vector<PhotonPattern> &samples) {
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
    const std::vector<double> freq = empirical(dist, samples);
    return total_variation(dist.probabilities, freq);
}

double mean(const std::vector<double> &values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double> &values) {
    if (values.size() < 2) return 0.0;
    const double mu = mean(values);
    double acc = 0.0;
    for (double v : values) acc += (v - mu) * (v - mu);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

TvdReport run_tvd_experiment(const TvdConfig &config) {
    if (config.unitaries < 1 || config.samples < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one unitary and one sample");
    TvdReport report;
    report.config = config;
    const auto m = static_cast<std::size_t>(config.modes);
    const std::vector<double> squeezing(m, config.squeezing);
    const std::vector<double> transmission(m, config.transmission);
    const std::vector<std::complex<double>> displacement(m, config.displacement);

    for (int u = 0; u < config.unitaries; ++u) {
        const auto uu = static_cast<std::uint64_t>(u);
        const std::uint64_t useed = mix64(config.unitary_seed * 1000003ULL + uu);
        const std::uint64_t sseed = mix64(config.seed * 1000003ULL + uu + 0x5851f42d4c957f2dULL);
        report.unitary_seeds.push_back(useed);
        report.sample_seeds.push_back(sseed);
        const CMatrix unitary = haar_unitary(config.modes, useed);
        const GaussianState state = prepare_gbs_state(squeezing, unitary, transmission, displacement, config.hbar);
        const PatternDistribution dist = enumerate_distribution(state, config.cutoff, config.kernel, config.threads);
        report.enumerated_mass.push_back(dist.enumerated_mass);

        SamplerConfig sc;
        sc.cutoff = config.cutoff;
        sc.seed = sseed;
        sc.kernel = config.kernel;
        const std::vector<Sample> chain = generate_batch(state, sc, config.samples, config.threads);
        std::vector<PhotonPattern> chain_patterns;
        chain_patterns.reserve(chain.size());
        for (const auto &s : chain) chain_patterns.push_back(s.pattern);
        report.tvd_chain.push_back(total_variation(dist, chain_patterns));

        CounterRng rng(sseed, 0, kStageBruteForce);
        report.tvd_brute.push_back(total_variation(dist, brute_force_sampler(dist, config.samples, rng)));
    }
    report.mean_chain = mean(report.tvd_chain);
    report.std_chain = sample_stddev(report.tvd_chain);
    report.mean_brute = mean(report.tvd_brute);
    report.std_brute = sample_stddev(report.tvd_brute);
    return report;
}

std::string telephone_number(int n) { return telephone_exact(n).str(); }

long double telephone_number_ld(int n) { return telephone_exact(n).convert_to<long double>(); }

AccuracyReport run_accuracy_experiment(const std::vector<int> &dims, Precision precision, int threads) {
    AccuracyReport report;
    report.precision = precision;
    KernelOptions opts;
    opts.precision = precision;
    opts.threads = threads;
    for (int n : dims) {
        if (n < 0) throw Error(ErrorCode::InvalidArgument, "dimension must be non-negative");
        const LHafInput input = LHafInput::make(CMatrix::Ones(n, n), true);
        const long double value = loop_hafnian_fast_ld(input, opts).real();
        const long double exact = telephone_number_ld(n);
        report.dims.push_back(n);
        report.values.push_back(value);
        report.exact.push_back(telephone_number(n));
        report.rel_err.push_back(static_cast<double>(std::fabs(value - exact) / exact));
    }
    return report;
}

CMatrix random_symmetric_uniform(int n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = uniform(engine);
            m(i, j) = {re, uniform(engine)};
        }
    return 0.5 * (m + m.transpose());
}

TimingReport run_timing_experiment(const std::vector<int> &dims, int trials, int threads, Precision precision,
                                   std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "at least one trial is required");
    TimingReport report;
    report.trials = trials;
    report.threads = threads > 0 ? threads : omp_get_max_threads();
    report.precision = precision;
    report.machine = machine_descriptor();
    KernelOptions opts;
    opts.precision = precision;
    opts.threads = threads;
    for (int n : dims) {
        std::vector<double> seconds;
        std::complex<double> value;
        for (int t = 0; t < trials; ++t) {
            const LHafInput input = LHafInput::make(
                random_symmetric_uniform(n, mix64(seed + 7919ULL * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(t))),
                true);
            const auto start = std::chrono::steady_clock::now();
            value = loop_hafnian_fast(input, opts);
            seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::sort(seconds.begin(), seconds.end());
        const std::size_t mid = seconds.size() / 2;
        const double median = seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
        report.dims.push_back(n);
        report.median_seconds.push_back(median);
        report.values.push_back(value);
    }
    return report;
}

std::string machine_descriptor() {
    std::ostringstream out;
    utsname info{};
    if (uname(&info) == 0) out << info.sysname << ' ' << info.release << ' ' << info.machine << "; ";
    out << "hardware threads " << std::thread::hardware_concurrency() << "; omp max threads " << omp_get_max_threads()
        << "; compiler " << __VERSION__;
    return out.str();
}

}  // namespace gbs
