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

#include <utility>

namespace busqed {

// Closed-form state of the dispersive two-level exchange: amplitudes of
// |0>_1|1>_2 and |1>_1|0>_2 under the effective pair coupling.
struct TwoLevelAmplitudes {
    Complex c01;
    Complex c10;
    double g_prime = 0.0;
    double delta = 0.0;
    double rabi = 0.0;  // Omega
};

// Exact solution of the two-level exchange equations,
//   c01(t) = {c01(0)[cos(Om t/2) + (i d/Om) sin(Om t/2)]
//             - (2 i g'/Om) c10(0) sin(Om t/2)} e^{-i d t/2},
//   c10(t) = {c10(0)[cos(Om t/2) - (i d/Om) sin(Om t/2)]
//             - (2 i g'/Om) c01(0) sin(Om t/2)} e^{+i d t/2},
// with Om^2 = 4 g'^2 + d^2. Om = 0 reduces to the identity.
TwoLevelAmplitudes two_level_solution(Complex c01_0, Complex c10_0, double g_prime, double delta,
                                      double t);

enum class BellKind { plus, minus };

// (|0>_j|1>_k + s i |1>_j|0>_k)/sqrt(2) with s = +1 (plus) or -1 (minus),
// embedded in the composite basis with all other modes in vacuum.
StateVector bell_target(BellKind kind, std::pair<int, int> pair, const CompositeBasis& basis);

// Swap duration g' t = pi/4 that turns a one-photon initial state into a
// Bell state.
double gate_time(double g_prime);

}  // namespace busqed
