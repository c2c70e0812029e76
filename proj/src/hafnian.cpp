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

#include "gbs/hafnian.hpp"

#include <cmath>
#include <string>

#include "gbs/error.hpp"
#include "hafnian_kernel.hpp"

namespace gbs {

namespace {

bool is_finite(const std::complex<long double> &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Row-major copy in the kernel's scalar type, padded to even dimension.
template <typename Real>
void to_kernel_layout(const LHafInput &input, std::vector<Complex<Real>> &mat, std::vector<Complex<Real>> &diag,
                      int &n) {
    const int raw = input.dim();
    n = raw + (raw % 2);
    const auto un = static_cast<std::size_t>(n);
    mat.assign(un * un, Complex<Real>{});
    diag.assign(un, Complex<Real>{});
    for (int i = 0; i < raw; ++i) {
        for (int j = 0; j < raw; ++j)
            if (i != j) mat[static_cast<std::size_t>(i * n + j)] = from_std<Real>(input.matrix(i, j));
        if (input.use_loops) diag[static_cast<std::size_t>(i)] = from_std<Real>(input.matrix(i, i));
    }
    if (n != raw) diag[un - 1] = Complex<Real>(Real(1.0));
}

void check_guard(const LHafInput &input, int max_dim) {
    if (input.dim() > max_dim)
        throw Error(ErrorCode::TooLarge,
                    "matrix dimension " + std::to_string(input.dim()) + " exceeds limit " + std::to_string(max_dim));
    if (!input.use_loops && input.dim() % 2 == 1)
        throw Error(ErrorCode::OddDimension, "hafnian of odd dimension " + std::to_string(input.dim()));
}

template <typename Real>
std::complex<long double> run_parallel(const LHafInput &input, int threads) {
    std::vector<Complex<Real>> mat, diag;
    int n = 0;
    to_kernel_layout(input, mat, diag, n);
    return to_std_ld(detail::loop_hafnian_parallel(mat, diag, input.use_loops, n, threads));
}

template <typename Real>
std::complex<long double> run_sequential(const LHafInput &input) {
    std::vector<Complex<Real>> mat, diag;
    int n = 0;
    to_kernel_layout(input, mat, diag, n);
    return to_std_ld(detail::loop_hafnian_sequential(mat, diag, input.use_loops, n));
}

std::complex<long double> finite_or_throw(std::complex<long double> value) {
    if (!is_finite(value)) throw Error(ErrorCode::NonFinite, "loop hafnian accumulation overflowed");
    return value;
}

struct BruteForce {
    const CMatrix &m;
    bool loops;
    std::vector<char> used;
    std::complex<long double> total{0.0L, 0.0L};

    void recurse(std::complex<long double> product) {
        const int n = static_cast<int>(m.rows());
        int i = 0;
        while (i < n && used[static_cast<std::size_t>(i)]) ++i;
        if (i == n) {
            total += product;
            return;
        }
        used[static_cast<std::size_t>(i)] = 1;
        if (loops) recurse(product * std::complex<long double>(m(i, i)));
        for (int j = i + 1; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = 1;
            recurse(product * std::complex<long double>(m(i, j)));
            used[static_cast<std::size_t>(j)] = 0;
        }
        used[static_cast<std::size_t>(i)] = 0;
    }
};

}  // namespace

Precision parse_precision(std::string_view name) {
    if (name == "auto") return Precision::Auto;
    if (name == "double") return Precision::Double;
    if (name == "extended") return Precision::Extended;
    if (name == "dd") return Precision::DoubleDouble;
    throw Error(ErrorCode::InvalidArgument, "unknown precision '" + std::string(name) + "'");
}

std::string_view to_string(Precision p) {
    switch (p) {
    case Precision::Auto: return "auto";
    case Precision::Double: return "double";
    case Precision::Extended: return "extended";
    case Precision::DoubleDouble: return "dd";
    }
    return "auto";
}

LHafInput LHafInput::make(CMatrix matrix, bool use_loops) {
    if (matrix.rows() != matrix.cols())
        throw Error(ErrorCode::DimensionMismatch, "loop hafnian input must be square");
    if (!matrix.allFinite()) throw Error(ErrorCode::NonFinite, "loop hafnian input has non-finite entries");
    if (matrix.size() > 0) {
        const double scale = matrix.cwiseAbs().maxCoeff();
        const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-10 * (1.0 + scale))
            throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric (max |M - M^T| = " + std::to_string(asym) + ")");
    }
    return LHafInput{std::move(matrix), use_loops};
}

Precision effective_precision(const KernelOptions &options, int n) {
    if (options.precision != Precision::Auto) return options.precision;
    return n > options.auto_extended_above ? Precision::Extended : Precision::Double;
}

std::complex<double> hafnian_bruteforce(const LHafInput &input) {
    const int n = input.dim();
    if (n > kBruteForceMaxDim)
        throw Error(ErrorCode::TooLarge, "brute-force enumeration limited to n <= " + std::to_string(kBruteForceMaxDim));
    if (!input.use_loops && n % 2 == 1)
        throw Error(ErrorCode::OddDimension, "hafnian of odd dimension " + std::to_string(n));
    BruteForce bf{input.matrix, input.use_loops, std::vector<char>(static_cast<std::size_t>(n), 0)};
    bf.recurse({1.0L, 0.0L});
    return {static_cast<double>(bf.total.real()), static_cast<double>(bf.total.imag())};
}

std::complex<long double> loop_hafnian_fast_ld(const LHafInput &input, const KernelOptions &options) {
    check_guard(input, options.max_dim);
    switch (effective_precision(options, input.dim())) {
    case Precision::Extended: return finite_or_throw(run_parallel<long double>(input, options.threads));
    case Precision::DoubleDouble: return finite_or_throw(run_parallel<DoubleDouble>(input, options.threads));
    default: return finite_or_throw(run_parallel<double>(input, options.threads));
    }
}

std::complex<double> loop_hafnian_fast(const LHafInput &input, const KernelOptions &options) {
    const auto v = loop_hafnian_fast_ld(input, options);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

std::complex<long double> loop_hafnian_serial(const LHafInput &input, Precision precision, int max_dim) {
    check_guard(input, max_dim);
    KernelOptions opts;
    opts.precision = precision;
    switch (effective_precision(opts, input.dim())) {
    case Precision::Extended: return finite_or_throw(run_sequential<long double>(input));
    case Precision::DoubleDouble: return finite_or_throw(run_sequential<DoubleDouble>(input));
    default: return finite_or_throw(run_sequential<double>(input));
    }
}

CMatrix hessenberg_reduce(const CMatrix &matrix) {
    const int n = static_cast<int>(matrix.rows());
    std::vector<Complex<double>> a(static_cast<std::size_t>(n * n)), scratch(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = from_std<double>(matrix(i, j));
    detail::hessenberg_inplace(a.data(), n, scratch.data());
    CMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto &z = a[static_cast<std::size_t>(i * n + j)];
            out(i, j) = {z.re, z.im};
        }
    return out;
}

std::vector<std::complex<double>> characteristic_polynomial(const CMatrix &hessenberg) {
    const int n = static_cast<int>(hessenberg.rows());
    if (hessenberg.cols() != n) throw Error(ErrorCode::DimensionMismatch, "characteristic polynomial needs a square matrix");
    if (!hessenberg.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite matrix entries");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < i; ++j)
            if (hessenberg(i, j) != 0.0)
                throw Error(ErrorCode::InvalidArgument, "matrix is not upper Hessenberg");
    const auto un = static_cast<std::size_t>(n);
    std::vector<Complex<double>> h(un * un), table((un + 1) * (un + 2) / 2), coeffs(un + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i * n + j)] = from_std<double>(hessenberg(i, j));
    detail::la_budde(h.data(), n, table.data(), coeffs.data());
    std::vector<std::complex<double>> out(un + 1);
    for (std::size_t t = 0; t <= un; ++t) out[t] = {coeffs[t].re, coeffs[t].im};
    return out;
}

std::vector<std::complex<double>> power_traces(const CMatrix &matrix, int count) {
    const CMatrix h = hessenberg_reduce(matrix);
    const auto c = characteristic_polynomial(h);
    const int n = static_cast<int>(matrix.rows());
    std::vector<Complex<double>> coeffs(c.size()), traces(static_cast<std::size_t>(count) + 1);
    for (std::size_t i = 0; i < c.size(); ++i) coeffs[i] = from_std<double>(c[i]);
    detail::newton_power_sums(coeffs.data(), n, count, traces.data());
    std::vector<std::complex<double>> out;
    for (int j = 1; j <= count; ++j) out.emplace_back(traces[static_cast<std::size_t>(j)].re, traces[static_cast<std::size_t>(j)].im);
    return out;
}

LHafInput reduce_by_pattern(const CMatrix &matrix, const CVector &diag, std::span<const int> multiplicities,
                            bool use_loops) {
    const auto k = static_cast<std::size_t>(matrix.rows());
    if (static_cast<std::size_t>(matrix.cols()) != k || static_cast<std::size_t>(diag.size()) != k ||
        multiplicities.size() != k)
        throw Error(ErrorCode::DimensionMismatch, "matrix, diagonal and multiplicities must agree in size");
    std::vector<int> index;
    for (std::size_t i = 0; i < k; ++i) {
        if (multiplicities[i] < 0)
            throw Error(ErrorCode::NegativeMultiplicity, "multiplicity of index " + std::to_string(i) + " is negative");
        for (int r = 0; r < multiplicities[i]; ++r) index.push_back(static_cast<int>(i));
    }
    const auto n = static_cast<Eigen::Index>(index.size());
    CMatrix out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) out(a, b) = matrix(index[static_cast<std::size_t>(a)], index[static_cast<std::size_t>(b)]);
        out(a, a) = diag(index[static_cast<std::size_t>(a)]);
    }
    return LHafInput{std::move(out), use_loops};
}

}  // namespace gbs
