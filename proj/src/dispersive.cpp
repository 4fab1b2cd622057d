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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace busqed {

TwoLevelAmplitudes two_level_solution(Complex c01_0, Complex c10_0, double g_prime, double delta,
                                      double t) {
    const double rabi = std::sqrt(4.0 * g_prime * g_prime + delta * delta);
    TwoLevelAmplitudes out;
    out.g_prime = g_prime;
    out.delta = delta;
    out.rabi = rabi;
    if (rabi == 0.0) {
        out.c01 = c01_0;
        out.c10 = c10_0;
        return out;
    }
    const double half = 0.5 * rabi * t;
    const double c = std::cos(half);
    const double s = std::sin(half);
    const Complex detuning_term = kI * (delta / rabi) * s;
    const Complex exchange_term = 2.0 * kI * (g_prime / rabi) * s;
    out.c01 = (c01_0 * (c + detuning_term) - exchange_term * c10_0) *
              std::exp(-kI * (0.5 * delta * t));
    out.c10 = (c10_0 * (c - detuning_term) - exchange_term * c01_0) *
              std::exp(kI * (0.5 * delta * t));
    return out;
}

StateVector bell_target(BellKind kind, std::pair<int, int> pair, const CompositeBasis& basis) {
    const int j = pair.first;
    const int k = pair.second;
    if (j < 0 || k < 0 || j >= basis.num_modes() || k >= basis.num_modes() || j == k) {
        throw std::invalid_argument("bell_target: invalid mode pair");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex sign = kind == BellKind::plus ? kI : -kI;

    std::vector<int> occ(basis.num_modes(), 0);
    CVector amp = CVector::Zero(basis.dim());
    occ[j] = 0;
    occ[k] = 1;
    const int i01 = basis.index_of(occ);
    occ[j] = 1;
    occ[k] = 0;
    const int i10 = basis.index_of(occ);
    if (i01 < 0 || i10 < 0) {
        throw std::invalid_argument("bell_target: basis does not support occupation 1");
    }
    amp[i01] = inv_sqrt2;
    amp[i10] = sign * inv_sqrt2;
    return {basis, std::move(amp)};
}

double gate_time(double g_prime) {
    if (g_prime == 0.0) {
        throw ConfigError("gate_time: g' must be nonzero");
    }
    return 0.25 * std::numbers::pi / std::abs(g_prime);
}

}  // namespace busqed
