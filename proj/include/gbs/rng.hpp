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

#include <cstdint>
#include <limits>

namespace gbs {

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based generator: the n-th output is a hash of (key, n), where the
/// key is derived from (seed, stream, stage). Streams never share state, so
/// per-sample draws are reproducible regardless of scheduling.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t stage = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace gbs
