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

#include <span>
#include <string_view>
#include <vector>

#include "gbs/gaussian_state.hpp"
#include "gbs/hafnian.hpp"

namespace gbs {

/// Photon counts per mode.
class PhotonPattern {
  public:
    PhotonPattern() = default;
    explicit PhotonPattern(std::vector<int> counts);

    const std::vector<int> &counts() const { return counts_; }
    int total() const { return total_; }
    int modes() const { return static_cast<int>(counts_.size()); }
    int operator[](std::size_t i) const { return counts_[i]; }

    friend bool operator==(const PhotonPattern &, const PhotonPattern &) = default;

  private:
    std::vector<int> counts_;
    int total_ = 0;
};

enum class Regime { MixedHaf, PureHaf, MixedLhaf, PureLhaf };

std::string_view to_string(Regime regime);

struct ProbabilityResult {
    double value = 0.0;
    Regime regime = Regime::MixedHaf;
    int expanded_dim = 0;  ///< dimension of the (loop) hafnian evaluated
    bool clamped = false;  ///< a negative roundoff value was set to zero
};

/// Roundoff slack below zero that is clamped silently; anything more
/// negative is reported as NegativeProbability.
inline constexpr double kNegativeSlack = 1e-9;

/// p(S) = p(vac) lhaf(filldiag(A_S, gamma_S)) / prod s_i!  (2N-dimensional).
ProbabilityResult probability_mixed(const GaussianState &state, const PhotonPattern &pattern,
                                    const KernelOptions &kernel = {});
ProbabilityResult probability_mixed(const ComplexForm &form, const PhotonPattern &pattern,
                                    const KernelOptions &kernel = {});

/// p(S) = p(vac) |lhaf(filldiag(B_S, gamma_bar_S))|^2 / prod s_i!  (N-dimensional).
/// Requires a form built from a pure state.
ProbabilityResult probability_pure(const ComplexForm &form, const PhotonPattern &pattern,
                                   const KernelOptions &kernel = {});

/// Pure route for pure states, mixed route otherwise.
ProbabilityResult probability(const GaussianState &state, const PhotonPattern &pattern,
                              const KernelOptions &kernel = {});

/// Unnormalised p(fixed..., s_k) for s_k = 0..cutoff on the pure state
/// described by `form` (k modes, fixed has k-1 entries). `max_dim`, when
/// given, receives the largest hafnian dimension evaluated.
std::vector<double> conditional_pure_probabilities(const ComplexForm &form, int cutoff, std::span<const int> fixed,
                                                   const KernelOptions &kernel = {}, int *max_dim = nullptr);
std::vector<double> conditional_pure_probabilities(const GaussianState &state, int cutoff,
                                                   std::span<const int> fixed, const KernelOptions &kernel = {});

}  // namespace gbs
