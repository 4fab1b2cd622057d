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

#include "busqed/errors.hpp"
#include "busqed/timeseries.hpp"

#include <cmath>
#include <stdexcept>

namespace busqed {

const std::vector<double>& TimeSeries::column(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) return columns[k];
    }
    throw std::invalid_argument("TimeSeries has no column '" + label + "'");
}

double population(const DensityMatrix& rho, const StateVector& target) {
    if (!(rho.basis == target.basis)) {
        throw std::invalid_argument("population: state and target bases differ");
    }
    const Complex form = target.amplitudes.dot(rho.matrix * target.amplitudes);
    if (std::abs(form.imag()) > 1e-10) {
        throw IntegratorError("population: imaginary residue " + std::to_string(form.imag()) +
                              " exceeds 1e-10");
    }
    return form.real();
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    return population(rho, target);
}

double purity(const DensityMatrix& rho) {
    return (rho.matrix * rho.matrix).trace().real();
}

double expectation(const DensityMatrix& rho, const CMatrix& op) {
    if (rho.matrix.rows() != op.rows() || rho.matrix.cols() != op.cols()) {
        throw std::invalid_argument("expectation: operator dimension mismatch");
    }
    return (rho.matrix * op).trace().real();
}

}  // namespace busqed
