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
#include <optional>
#include <span>
#include <vector>

#include "gbs/gaussian_state.hpp"
#include "gbs/probabilities.hpp"
#include "gbs/rng.hpp"

namespace gbs {

struct SamplerConfig {
    int cutoff = 6;
    std::uint64_t seed = 0;
    bool threshold = false;             ///< report clicks (min(s, 1)) instead of counts
    std::optional<int> max_photons;     ///< abort a sample whose running total exceeds this
    KernelOptions kernel{};
};

struct Sample {
    PhotonPattern pattern;
    bool clamped = false;            ///< some mode was drawn at the cutoff
    std::vector<double> mode_mass;   ///< unnormalised conditional mass at each step
    int max_kernel_dim = 0;          ///< largest loop hafnian evaluated (before padding)
};

/// Draws from N(mean, cov) for a fixed covariance. The factor is a Cholesky
/// factor unless the smallest eigenvalue is below 1e-10, in which case an
/// eigen-based square root is used so singular covariances work.
class MultivariateNormal {
  public:
    MultivariateNormal() = default;
    explicit MultivariateNormal(const RMatrix &cov);

    RVector draw(const RVector &mean, CounterRng &rng) const;
    const RMatrix &factor() const { return factor_; }

  private:
    RMatrix factor_;
};

RVector sample_multivariate_normal(const RVector &mean, const RMatrix &cov, CounterRng &rng);

/// Heterodyne outcome on `modes`: mu ~ N(R_B, (V + hbar/2 I)_BB), returned as
/// complex amplitudes (q + ip)/sqrt(2 hbar).
std::vector<std::complex<double>> sample_heterodyne_joint(const GaussianState &state, std::span<const int> modes,
                                                          CounterRng &rng);

/// Chain-rule photon-number sampler. Mixed states are purified through the
/// Williamson split (random means drawn from N(R, W)); modes 2..m are then
/// replaced by virtual heterodyne outcomes which are swapped one by one for
/// photon counts drawn from pure-state conditional probabilities.
///
/// Everything that depends only on the covariance (the split, the
/// heterodyne factor, each conditional covariance and its complex form) is
/// computed once here; a draw only updates means.
class ChainSampler {
  public:
    ChainSampler(const GaussianState &state, SamplerConfig config);

    /// Sample number `index`; uses the RNG streams keyed by (seed, index).
    Sample draw(std::uint64_t index) const;

    const SamplerConfig &config() const { return config_; }
    bool purified() const { return !pure_; }

  private:
    struct Step {
        HeterodyneConditioner conditioner;
        ComplexForm form;
    };

    SamplerConfig config_;
    int modes_ = 0;
    double hbar_ = kDefaultHbar;
    bool pure_ = true;
    RVector means_;
    MultivariateNormal classical_;   // N(0, W) for mixed states
    MultivariateNormal heterodyne_;  // (T + hbar/2)_BB on modes 2..m
    std::vector<Step> steps_;
};

enum RngStage : std::uint64_t { kStageClassical = 0, kStageHeterodyne = 1, kStageCategorical = 2, kStageBruteForce = 3 };

Sample generate_sample(const GaussianState &state, const SamplerConfig &config, std::uint64_t index = 0);

/// `count` samples with streams 0..count-1, spread over `threads` workers
/// (0 = OpenMP default). The output does not depend on `threads`.
std::vector<Sample> generate_batch(const GaussianState &state, const SamplerConfig &config, std::size_t count,
                                   int threads = 0);

}  // namespace gbs
