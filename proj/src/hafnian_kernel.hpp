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

// Templated power-trace loop hafnian. Instantiated for double,
// long double and DoubleDouble in hafnian.cpp.

#include <algorithm>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "gbs/scalar.hpp"

namespace gbs::detail {

template <typename Real>
using Cx = Complex<Real>;

template <typename Real>
struct Workspace {
    std::vector<int> pos;
    std::vector<Cx<Real>> b;      // A_Z X, row-major
    std::vector<Cx<Real>> h;      // Hessenberg copy of b
    std::vector<Cx<Real>> table;  // La Budde coefficient table
    std::vector<Cx<Real>> coeffs;
    std::vector<Cx<Real>> traces;
    std::vector<Cx<Real>> left, w, w_next, scratch;
    std::vector<Cx<Real>> f, g;

    void reserve(int n) {
        const auto un = static_cast<std::size_t>(n);
        const auto k = un / 2;
        pos.resize(k);
        b.resize(un * un);
        h.resize(un * un);
        table.resize((un + 1) * (un + 2) / 2);
        coeffs.resize(un + 1);
        traces.resize(k + 1);
        left.resize(un);
        w.resize(un);
        scratch.resize(2 * un);
        w_next.resize(un);
        f.resize(k + 1);
        g.resize(k + 1);
    }
};

/// In-place Householder reduction of the n x n row-major matrix `a`.
/// `v` is scratch space of at least 2n entries.
template <typename Real>
void hessenberg_inplace(Cx<Real> *a, int n, Cx<Real> *v) {
    using std::sqrt;
    for (int c = 0; c + 2 < n; ++c) {
        // Scale by the largest entry so rank-deficient inputs, whose later
        // columns shrink to roundoff, neither underflow nor divide by zero.
        Real big = Real(0.0);
        for (int r = c + 2; r < n; ++r) big = std::max(big, abs(a[r * n + c]));
        if (!(big > Real(1e-280))) {
            for (int r = c + 2; r < n; ++r) a[r * n + c] = Cx<Real>{};
            continue;
        }
        big = std::max(big, abs(a[(c + 1) * n + c]));
        const Real inv = Real(1.0) / big;

        Real tail = Real(0.0);
        for (int r = c + 2; r < n; ++r) tail += norm(a[r * n + c] * inv);
        const Cx<Real> x0 = a[(c + 1) * n + c] * inv;
        const Real x0abs = abs(x0);
        const Real alpha = sqrt(tail + x0abs * x0abs);
        const Cx<Real> phase = (x0abs == Real(0.0)) ? Cx<Real>(Real(1.0)) : x0 / x0abs;

        const int len = n - c - 1;
        v[0] = x0 + phase * alpha;
        Real vnorm = norm(v[0]);
        for (int r = 1; r < len; ++r) {
            v[r] = a[(c + 1 + r) * n + c] * inv;
            vnorm += norm(v[r]);
        }
        const Real scale = Real(2.0) / vnorm;

        // a <- P a on rows c+1..n-1, row-wise so the access stays contiguous
        Cx<Real> *dots = v + len;
        for (int j = c; j < n; ++j) dots[j] = Cx<Real>{};
        for (int r = 0; r < len; ++r) {
            const Cx<Real> vr = conj(v[r]);
            const Cx<Real> *row = a + (c + 1 + r) * n;
            for (int j = c; j < n; ++j) dots[j] += vr * row[j];
        }
        for (int j = c; j < n; ++j) dots[j] = dots[j] * scale;
        for (int r = 0; r < len; ++r) {
            const Cx<Real> vr = v[r];
            Cx<Real> *row = a + (c + 1 + r) * n;
            for (int j = c; j < n; ++j) row[j] -= vr * dots[j];
        }
        // a <- a P on columns c+1..n-1
        for (int i = 0; i < n; ++i) {
            Cx<Real> dot{};
            Cx<Real> *row = a + i * n + c + 1;
            for (int r = 0; r < len; ++r) dot += row[r] * v[r];
            dot = dot * scale;
            for (int r = 0; r < len; ++r) row[r] -= dot * conj(v[r]);
        }
        for (int r = c + 2; r < n; ++r) a[r * n + c] = Cx<Real>{};
    }
}

/// La Budde recursion on an upper-Hessenberg matrix. Writes
/// (1, c_1, ..., c_n) of det(xI - H) into `out`. `table` needs
/// (n+1)(n+2)/2 entries; row i holds the i+1 coefficients of p_i.
template <typename Real>
void la_budde(const Cx<Real> *h, int n, Cx<Real> *table, Cx<Real> *out) {
    auto row = [&](int i) { return table + i * (i + 1) / 2; };
    row(0)[0] = Cx<Real>(Real(1.0));
    for (int i = 0; i < n; ++i) {
        Cx<Real> *next = row(i + 1);
        const Cx<Real> *cur = row(i);
        const Cx<Real> diag = h[i * n + i];
        next[0] = Cx<Real>(Real(1.0));
        for (int t = 1; t <= i + 1; ++t) {
            Cx<Real> val = (t <= i) ? cur[t] : Cx<Real>{};
            val -= diag * cur[t - 1];
            next[t] = val;
        }
        Cx<Real> sub_product(Real(1.0));
        for (int m = 1; m <= i; ++m) {
            sub_product = sub_product * h[(i - m + 1) * n + (i - m)];
            const Cx<Real> coef = h[(i - m) * n + i] * sub_product;
            const Cx<Real> *prev = row(i - m);  // p_{i-m}, degree i-m
            // p_{i+1} -= coef * p_{i-m}; exponent shift of m+1
            for (int t = m + 1; t <= i + 1; ++t) next[t] -= coef * prev[t - m - 1];
        }
    }
    for (int t = 0; t <= n; ++t) out[t] = row(n)[t];
}

/// Newton's identities: power sums p_1..p_count from (1, c_1, ..., c_n).
template <typename Real>
void newton_power_sums(const Cx<Real> *coeffs, int n, int count, Cx<Real> *traces) {
    for (int j = 1; j <= count; ++j) {
        Cx<Real> val = (j <= n) ? coeffs[j] * Real(-static_cast<double>(j)) : Cx<Real>{};
        const int top = std::min(j - 1, n);
        for (int i = 1; i <= top; ++i) val -= coeffs[i] * traces[j - i];
        traces[j] = val;
    }
}

/// Signed inclusion-exclusion term for subset `mask` of the n/2 index pairs.
template <typename Real>
Cx<Real> subset_term(const Cx<Real> *mat, const Cx<Real> *diag, bool loops, int n, std::uint64_t mask,
                     Workspace<Real> &ws) {
    const int k = n / 2;
    int s = 0;
    for (int p = 0; p < k; ++p)
        if ((mask >> p) & 1u) ws.pos[s++] = p;
    if (s == 0) return Cx<Real>{};
    const int d = 2 * s;

    // b = (A X) restricted to the chosen pairs
    for (int i = 0; i < s; ++i) {
        const int ri = 2 * ws.pos[i];
        for (int j = 0; j < s; ++j) {
            const int cj = 2 * ws.pos[j];
            ws.b[(2 * i) * d + 2 * j] = mat[ri * n + cj + 1];
            ws.b[(2 * i) * d + 2 * j + 1] = mat[ri * n + cj];
            ws.b[(2 * i + 1) * d + 2 * j] = mat[(ri + 1) * n + cj + 1];
            ws.b[(2 * i + 1) * d + 2 * j + 1] = mat[(ri + 1) * n + cj];
        }
    }
    std::copy(ws.b.begin(), ws.b.begin() + d * d, ws.h.begin());
    hessenberg_inplace(ws.h.data(), d, ws.scratch.data());
    la_budde(ws.h.data(), d, ws.table.data(), ws.coeffs.data());
    // The two leading coefficients from traces of b itself: the Hessenberg
    // similarity adds roundoff to them that every power sum then inherits.
    Cx<Real> p1{}, p2{};
    for (int i = 0; i < d; ++i) {
        p1 += ws.b[i * d + i];
        for (int j = 0; j < d; ++j) p2 += ws.b[i * d + j] * ws.b[j * d + i];
    }
    ws.coeffs[1] = -p1;
    ws.coeffs[2] = (p1 * p1 - p2) * Real(0.5);
    newton_power_sums(ws.coeffs.data(), d, k, ws.traces.data());

    for (int j = 1; j <= k; ++j) ws.f[j] = ws.traces[j] / Real(2.0 * j);

    if (loops) {
        for (int i = 0; i < s; ++i) {
            const int ri = 2 * ws.pos[i];
            ws.left[2 * i] = diag[ri + 1];
            ws.left[2 * i + 1] = diag[ri];
            ws.w[2 * i] = diag[ri];
            ws.w[2 * i + 1] = diag[ri + 1];
        }
        for (int j = 1; j <= k; ++j) {
            Cx<Real> dot{};
            for (int r = 0; r < d; ++r) dot += ws.left[r] * ws.w[r];
            ws.f[j] += dot / Real(2.0);
            if (j == k) break;
            for (int r = 0; r < d; ++r) {
                Cx<Real> acc{};
                const Cx<Real> *brow = ws.b.data() + r * d;
                for (int c = 0; c < d; ++c) acc += brow[c] * ws.w[c];
                ws.w_next[r] = acc;
            }
            std::swap(ws.w, ws.w_next);
        }
    }

    // coefficient of t^k in exp(sum_j f_j t^j)
    ws.g[0] = Cx<Real>(Real(1.0));
    for (int t = 1; t <= k; ++t) {
        Cx<Real> acc{};
        for (int j = 1; j <= t; ++j) acc += ws.f[j] * ws.g[t - j] * Real(static_cast<double>(j));
        ws.g[t] = acc / Real(static_cast<double>(t));
    }
    return ((k - s) % 2 == 0) ? ws.g[k] : -ws.g[k];
}

template <typename Real>
Cx<Real> sum_range(const Cx<Real> *mat, const Cx<Real> *diag, bool loops, int n, std::uint64_t begin,
                   std::uint64_t end, Workspace<Real> &ws) {
    Cx<Real> acc{};
    for (std::uint64_t mask = begin; mask < end; ++mask) acc += subset_term(mat, diag, loops, n, mask, ws);
    return acc;
}

template <typename Real>
Cx<Real> pairwise_sum(std::vector<Cx<Real>> &values) {
    std::size_t len = values.size();
    if (len == 0) return Cx<Real>{};
    while (len > 1) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < half; ++i) values[i] = values[2 * i] + values[2 * i + 1];
        if (len % 2 == 1) values[half] = values[len - 1];
        len = half + (len % 2);
    }
    return values[0];
}

inline constexpr int kParallelMinPairs = 10;
inline constexpr std::uint64_t kChunkCount = 4096;

/// `mat` is n x n row-major with n even; `diag` has n entries.
template <typename Real>
Cx<Real> loop_hafnian_parallel(const std::vector<Cx<Real>> &mat, const std::vector<Cx<Real>> &diag, bool loops,
                               int n, int threads) {
    const int k = n / 2;
    if (k == 0) return Cx<Real>(Real(1.0));
    const std::uint64_t total = std::uint64_t{1} << k;

    if (k < kParallelMinPairs) {
        thread_local Workspace<Real> ws;
        ws.reserve(n);
        return sum_range(mat.data(), diag.data(), loops, n, 1, total, ws);
    }

    const std::uint64_t chunks = std::min(total, kChunkCount);
    std::vector<Cx<Real>> partial(chunks);
    const int width = threads > 0 ? threads : omp_get_max_threads();
    const auto nchunks = static_cast<std::int64_t>(chunks);

#pragma omp parallel num_threads(width)
    {
        Workspace<Real> ws;
        ws.reserve(n);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < nchunks; ++c) {
            const auto uc = static_cast<std::uint64_t>(c);
            const std::uint64_t begin = total / chunks * uc;
            const std::uint64_t end = total / chunks * (uc + 1);
            partial[uc] = sum_range(mat.data(), diag.data(), loops, n, begin, end, ws);
        }
    }
    return pairwise_sum(partial);
}

template <typename Real>
Cx<Real> loop_hafnian_sequential(const std::vector<Cx<Real>> &mat, const std::vector<Cx<Real>> &diag, bool loops,
                                 int n) {
    const int k = n / 2;
    if (k == 0) return Cx<Real>(Real(1.0));
    Workspace<Real> ws;
    ws.reserve(n);
    return sum_range(mat.data(), diag.data(), loops, n, 1, std::uint64_t{1} << k, ws);
}

}  // namespace gbs::detail
