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

#include "gbs/scalar.hpp"

using gbs::Complex;
using gbs::DoubleDouble;

TEST_CASE("two_sum and two_prod are error-free") {
    const double a = 1.0, b = 1e-20;
    const DoubleDouble s = gbs::dd_detail::two_sum(a, b);
    CHECK(s.hi == 1.0);
    CHECK(s.lo == 1e-20);
    const double x = 1.0 + std::ldexp(1.0, -30);
    const DoubleDouble p = gbs::dd_detail::two_prod(x, x);
    CHECK(p.hi == 1.0 + std::ldexp(1.0, -29));
    CHECK(p.lo == std::ldexp(1.0, -60));
}

TEST_CASE("double-double carries digits past binary64") {
    DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
    const DoubleDouble back = third * DoubleDouble(3.0);
    CHECK(std::fabs(static_cast<long double>(back) - 1.0L) < 1e-18L);
    // 1 + 2^-80 survives in double-double but not in double.
    const DoubleDouble big = DoubleDouble(1.0) + DoubleDouble(std::ldexp(1.0, -80));
    CHECK((big - DoubleDouble(1.0)).hi == std::ldexp(1.0, -80));
    const DoubleDouble two = gbs::sqrt(DoubleDouble(2.0));
    CHECK(std::fabs(static_cast<long double>(two * two) - 2.0L) < 1e-18L);
}

TEST_CASE("complex arithmetic") {
    const Complex<double> a{1.0, 2.0}, b{-0.5, 3.0};
    const auto p = a * b;
    CHECK(p.re == doctest::Approx(-6.5));
    CHECK(p.im == doctest::Approx(2.0));
    const auto q = p / b;
    CHECK(q.re == doctest::Approx(1.0));
    CHECK(q.im == doctest::Approx(2.0));
    CHECK(gbs::norm(a) == doctest::Approx(5.0));
    const Complex<DoubleDouble> z = gbs::from_std<DoubleDouble>({0.25, -4.0});
    const auto w = z * gbs::conj(z);
    CHECK(static_cast<double>(w.re) == doctest::Approx(16.0625));
    CHECK(static_cast<double>(w.im) == 0.0);
}
