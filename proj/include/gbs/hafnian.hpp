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
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gbs {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Working precision of the power-trace kernel.
///   Double       - IEEE binary64
///   Extended     - long double (x87 80-bit on x86-64)
///   DoubleDouble - software double-double, ~106 bit mantissa
///   Auto         - Double up to KernelOptions::auto_extended_above, Extended beyond
enum class Precision { Auto, Double, Extended, DoubleDouble };

Precision parse_precision(std::string_view name);
std::string_view to_string(Precision p);

/// A complex symmetric matrix whose diagonal carries the loop weights.
/// With use_loops == false the diagonal is ignored and the plain hafnian
/// is computed.
struct LHafInput {
    CMatrix matrix;
    bool use_loops = true;

    /// Validates symmetry (|M - M^T| <= 1e-10 (1 + |M|)) and finiteness.
    static LHafInput make(CMatrix matrix, bool use_loops);

    int dim() const { return static_cast<int>(matrix.rows()); }
};

struct KernelOptions {
    Precision precision = Precision::Auto;
    int threads = 0;  ///< 0 means the OpenMP default
    int max_dim = 56;
    int auto_extended_above = 30;
};

inline constexpr int kBruteForceMaxDim = 14;

/// Direct enumeration over perfect matchings (or single-pair matchings
/// when use_loops). Exponential; guarded at n <= 14.
std::complex<double> hafnian_bruteforce(const LHafInput &input);

/// Power-trace inclusion-exclusion over the 2^(n/2) subsets of index pairs.
/// Per-subset power traces come from a Householder Hessenberg reduction
/// followed by the La Budde characteristic polynomial recursion and
/// Newton's identities. Parallel over subsets with a fixed chunking and
/// pairwise reduction, so the value does not depend on the thread count.
/// Odd dimensions are padded with an isolated index carrying a unit loop.
std::complex<double> loop_hafnian_fast(const LHafInput &input, const KernelOptions &options = {});

/// Same as loop_hafnian_fast but returns the accumulator in long double,
/// which keeps the extra digits of the Extended/DoubleDouble modes.
std::complex<long double> loop_hafnian_fast_ld(const LHafInput &input, const KernelOptions &options = {});

/// Single-threaded reference of the same algorithm with a plain running
/// sum. Kept for testing the parallel kernel and for benchmarking.
std::complex<long double> loop_hafnian_serial(const LHafInput &input, Precision precision = Precision::Double,
                                              int max_dim = 56);

/// Resolves Precision::Auto for a matrix of dimension n.
Precision effective_precision(const KernelOptions &options, int n);

/// Monic characteristic polynomial det(xI - H) of an upper-Hessenberg
/// matrix via the La Budde recursion. Returns (1, c_1, ..., c_n) with
/// det(xI - H) = x^n + c_1 x^(n-1) + ... + c_n.
std::vector<std::complex<double>> characteristic_polynomial(const CMatrix &hessenberg);

/// Householder similarity reduction to upper-Hessenberg form.
CMatrix hessenberg_reduce(const CMatrix &matrix);

/// tr(M^j) for j = 1..count, through Hessenberg + La Budde + Newton.
std::vector<std::complex<double>> power_traces(const CMatrix &matrix, int count);

/// Expands a k-index matrix by per-index multiplicities: index i appears
/// multiplicities[i] times (0 deletes it). The diagonal of the result is
/// filled from `diag` expanded the same way.
LHafInput reduce_by_pattern(const CMatrix &matrix, const CVector &diag, std::span<const int> multiplicities,
                            bool use_loops = true);

}  // namespace gbs
