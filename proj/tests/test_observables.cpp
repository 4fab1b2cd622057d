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

#include "busqed/observables.hpp"

#include "busqed/dispersive.hpp"
#include "busqed/errors.hpp"
#include "doctest.h"

#include <stdexcept>

using namespace busqed;

TEST_CASE("population of pure states") {
    CompositeBasis basis({2, 2, 2});
    const StateVector psi1 = basis_state({1, 0, 0}, basis);
    const StateVector psi2 = basis_state({0, 1, 0}, basis);
    const DensityMatrix rho = pure_density(psi1);
    CHECK(population(rho, psi1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(population(rho, psi2) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("population of the maximally mixed single-excitation state") {
    CompositeBasis basis({2, 2, 2});
    const StateVector psi1 = basis_state({1, 0, 0}, basis);
    const StateVector psi2 = basis_state({0, 1, 0}, basis);
    const StateVector psiR = basis_state({0, 0, 1}, basis);
    DensityMatrix rho{basis, CMatrix::Zero(basis.dim(), basis.dim())};
    for (const auto* s : {&psi1, &psi2, &psiR}) {
        rho.matrix += (s->amplitudes * s->amplitudes.adjoint()) / 3.0;
    }
    CHECK(population(rho, psi1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(population(rho, psi2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("fidelity is the same quadratic form") {
    CompositeBasis basis({2, 2, 2});
    const StateVector psi1 = basis_state({1, 0, 0}, basis);
    const StateVector plus = bell_target(BellKind::plus, {0, 1}, basis);
    const DensityMatrix rho = pure_density(psi1);
    CHECK(fidelity(rho, plus) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fidelity(pure_density(plus), plus) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("basis mismatch is rejected") {
    CompositeBasis a({2, 2, 2});
    CompositeBasis b({2, 2});
    const DensityMatrix rho = pure_density(basis_state({1, 0, 0}, a));
    CHECK_THROWS_AS(population(rho, basis_state({1, 0}, b)), std::invalid_argument);
}

TEST_CASE("imaginary residue guard") {
    CompositeBasis basis({2});
    DensityMatrix rho{basis, CMatrix::Zero(2, 2)};
    rho.matrix << Complex(0.5), Complex(0.0, 0.5), Complex(0.0, 0.5), Complex(0.5);
    // not Hermitian: the quadratic form against (|0>+|1>)/sqrt(2) turns imaginary
    StateVector target = basis_state({0}, basis);
    target.amplitudes << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(population(rho, target), IntegratorError);
}

TEST_CASE("purity") {
    CompositeBasis basis({2, 2});
    const StateVector psi = basis_state({1, 0}, basis);
    CHECK(purity(pure_density(psi)) == doctest::Approx(1.0));
    DensityMatrix mixed{basis, CMatrix::Identity(4, 4) / 4.0};
    CHECK(purity(mixed) == doctest::Approx(0.25));
}

TEST_CASE("expectation value of the total number operator") {
    CompositeBasis basis({2, 2});
    const DensityMatrix rho = pure_density(basis_state({1, 1}, basis));
    CHECK(expectation(rho, total_number_op(basis)) == doctest::Approx(2.0));
}
