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

#pragma once

#include "busqed/fock.hpp"
#include "busqed/types.hpp"

namespace busqed {

// <target| rho |target>. Raises when the imaginary residue of the quadratic
// form exceeds 1e-10 (corrupted state).
double population(const DensityMatrix& rho, const StateVector& target);

// Overlap fidelity with a pure target state: the same quadratic form as
// population.
double fidelity(const DensityMatrix& rho, const StateVector& target);

// Tr(rho^2)
double purity(const DensityMatrix& rho);

// Tr(rho op), real part; op must be Hermitian for this to be meaningful.
double expectation(const DensityMatrix& rho, const CMatrix& op);

}  // namespace busqed
