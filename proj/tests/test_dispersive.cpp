// Copyright 2026 The busqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "busqed/dispersive.hpp"

#include "busqed/errors.hpp"
#include "busqed/observables.hpp"
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace busqed;

TEST_CASE("two-level solution at t = 0 is the identity") {
    const Complex c01(0.3, 0.4);
    const Complex c10(-0.5, std::sqrt(1.0 - 0.25 - 0.09 - 0.16));
    const auto out = two_level_solution(c01, c10, mhz_to_rad(5.0), mhz_to_rad(1.0), 0.0);
    CHECK(std::abs(out.c01 - c01) < 1e-15);
    CHECK(std::abs(out.c10 - c10) < 1e-15);
}

TEST_CASE("resonant evolution from |1,0>") {
    const double g = mhz_to_rad(5.0);
    for (const double gt : {0.1, std::numbers::pi / 4.0, std::numbers::pi / 2.0, 2.0}) {
        const double t = gt / g;
        const auto out = two_level_solution(Complex(0.0), Complex(1.0), g, 0.0, t);
        // c10(t) = cos(g t), c01(t) = -i sin(g t), exactly Eqs. at delta = 0
        CHECK(std::abs(out.c10 - Complex(std::cos(gt))) < 1e-12);
        CHECK(std::abs(out.c01 - Complex(0.0, -std::sin(gt))) < 1e-12);
    }
    // half-period: full swap
    const auto swap = two_level_solution(Complex(0.0), Complex(1.0), g, 0.0,
                                         0.5 * std::numbers::pi / g);
    CHECK(std::abs(swap.c01) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(swap.c10) < 1e-12);
    // quarter-period: balanced superposition
    const auto bell = two_level_solution(Complex(0.0), Complex(1.0), g, 0.0,
                                         0.25 * std::numbers::pi / g);
    CHECK(std::abs(bell.c01) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(bell.c10) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("unitarity over random draws") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mhz(-10.0, 10.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::uniform_real_distribution<double> mix(0.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, ns_to_s(500.0));
    for (int k = 0; k < 200; ++k) {
        const double p = mix(rng);
        const Complex c01 = std::sqrt(p) * std::exp(kI * phase(rng));
        const Complex c10 = std::sqrt(1.0 - p) * std::exp(kI * phase(rng));
        const auto out =
            two_level_solution(c01, c10, mhz_to_rad(mhz(rng)), mhz_to_rad(mhz(rng)), time(rng));
        CHECK(std::abs(std::norm(out.c01) + std::norm(out.c10) - 1.0) <= 1e-10);
    }
}

TEST_CASE("zero coupling and zero detuning is the identity") {
    const auto out = two_level_solution(Complex(1.0), Complex(0.0), 0.0, 0.0, 1e-6);
    CHECK(out.c01 == Complex(1.0));
    CHECK(out.c10 == Complex(0.0));
    CHECK(out.rabi == 0.0);
}

TEST_CASE("bell targets") {
    CompositeBasis basis({2, 2, 2});
    const StateVector plus = bell_target(BellKind::plus, {0, 1}, basis);
    const int i01 = basis.index_of(std::vector<int>{0, 1, 0});
    const int i10 = basis.index_of(std::vector<int>{1, 0, 0});
    CHECK(std::abs(plus.amplitudes[i01] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(plus.amplitudes[i10] - kI / std::sqrt(2.0)) < 1e-15);
    CHECK(plus.norm() == doctest::Approx(1.0));

    const StateVector minus = bell_target(BellKind::minus, {0, 1}, basis);
    CHECK(std::abs(plus.amplitudes.dot(minus.amplitudes)) < 1e-15);  // orthogonal

    // fidelity of the initial state |1,0,0> against a Bell state is 1/2
    const DensityMatrix rho = pure_density(basis_state({1, 0, 0}, basis));
    CHECK(fidelity(rho, plus) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(bell_target(BellKind::plus, {0, 0}, basis), std::invalid_argument);
    CHECK_THROWS_AS(bell_target(BellKind::plus, {0, 5}, basis), std::invalid_argument);
}

TEST_CASE("gate time") {
    CHECK(s_to_ns(gate_time(mhz_to_rad(5.0))) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(s_to_ns(gate_time(mhz_to_rad(10.0))) == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(s_to_ns(gate_time(mhz_to_rad(-5.0))) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK_THROWS_AS(gate_time(0.0), ConfigError);
}
