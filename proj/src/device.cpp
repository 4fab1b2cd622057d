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

#include "busqed/device.hpp"

#include "busqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace busqed {

std::string to_string(Frame f) {
    switch (f) {
        case Frame::lab: return "lab";
        case Frame::interaction: return "interaction";
        case Frame::effective: return "effective";
    }
    return "?";
}

std::string to_string(GPrimeFormula f) {
    return f == GPrimeFormula::paper ? "paper" : "half";
}

Frame frame_from_string(const std::string& s) {
    if (s == "lab") return Frame::lab;
    if (s == "interaction") return Frame::interaction;
    if (s == "effective") return Frame::effective;
    throw ConfigError("unknown frame '" + s + "' (expected lab, interaction or effective)");
}

GPrimeFormula gprime_formula_from_string(const std::string& s) {
    if (s == "paper") return GPrimeFormula::paper;
    if (s == "half") return GPrimeFormula::half;
    throw ConfigError("unknown gprime_formula '" + s + "' (expected paper or half)");
}

std::vector<int> DeviceConfig::mode_dims() const {
    std::vector<int> dims;
    dims.reserve(num_modes());
    for (const auto& r : resonators) dims.push_back(r.fock_dim);
    dims.push_back(bus_fock_dim);
    return dims;
}

void DeviceConfig::validate() const {
    if (bus_omega <= 0.0) throw ConfigError("bus frequency must be positive");
    if (bus_kappa < 0.0) throw ConfigError("bus decay rate must be >= 0");
    if (bus_fock_dim < 2) throw ConfigError("bus Fock dimension must be >= 2");
    if (resonators.empty()) throw ConfigError("device needs at least one resonator");
    for (std::size_t j = 0; j < resonators.size(); ++j) {
        const auto& r = resonators[j];
        const std::string where = "resonator " + (r.label.empty() ? std::to_string(j) : r.label);
        if (r.omega <= 0.0) throw ConfigError(where + ": frequency must be positive");
        if (r.g < 0.0) throw ConfigError(where + ": coupling must be >= 0");
        if (r.kappa < 0.0) throw ConfigError(where + ": decay rate must be >= 0");
        if (r.fock_dim < 2) throw ConfigError(where + ": Fock dimension must be >= 2");
    }
}

std::vector<std::string> dispersive_warnings(const DeviceConfig& config) {
    std::vector<std::string> warnings;
    for (int j = 0; j < config.num_resonators(); ++j) {
        const double d = config.delta(j);
        const auto& r = config.resonators[j];
        if (d == 0.0) {
            if (r.g > 0.0) {
                warnings.push_back("resonator " + r.label + " is resonant with the bus");
            }
            continue;
        }
        const double ratio = std::abs(r.g / d);
        if (ratio > config.dispersive_warn_threshold) {
            warnings.push_back("resonator " + r.label + ": |g/Delta| = " +
                               std::to_string(ratio) + " exceeds dispersive threshold " +
                               std::to_string(config.dispersive_warn_threshold));
        }
    }
    return warnings;
}

EffectiveParams effective_params(const DeviceConfig& config, std::pair<int, int> pair,
                                 GPrimeFormula formula) {
    const int j1 = pair.first;
    const int j2 = pair.second;
    if (j1 < 0 || j2 < 0 || j1 >= config.num_resonators() || j2 >= config.num_resonators() ||
        j1 == j2) {
        throw std::invalid_argument("effective_params: invalid resonator pair");
    }
    const double d1 = config.delta(j1);
    const double d2 = config.delta(j2);
    if (d1 == 0.0 || d2 == 0.0) {
        throw ConfigError("effective_params: zero detuning for resonator pair (" +
                          std::to_string(j1) + "," + std::to_string(j2) + ")");
    }
    const double g1 = config.resonators[j1].g;
    const double g2 = config.resonators[j2].g;

    EffectiveParams p;
    p.formula = formula;
    p.g_prime = g1 * g2 * (d1 + d2) / (d1 * d2);
    if (formula == GPrimeFormula::half) p.g_prime *= 0.5;
    p.chi1 = g1 * g1 / d1;
    p.chi2 = g2 * g2 / d2;
    p.bus_omega_shifted = config.bus_omega - p.chi1 - p.chi2;
    p.omega1_shifted = config.resonators[j1].omega + p.chi1;
    p.omega2_shifted = config.resonators[j2].omega + p.chi2;
    p.delta = p.omega1_shifted - p.omega2_shifted;
    p.rabi = std::sqrt(4.0 * p.g_prime * p.g_prime + p.delta * p.delta);
    return p;
}

CMatrix HamiltonianModel::evaluate(double t) const {
    CMatrix h = static_part;
    for (const auto& term : rotating_terms) {
        const Complex phase = std::exp(-kI * term.frequency * t);
        h.noalias() += phase * term.op;
        h.noalias() += std::conj(phase) * term.op.adjoint();
    }
    return h;
}

double HamiltonianModel::max_norm() const {
    auto spectral_norm = [](const CMatrix& m) {
        return m.template selfadjointView<Eigen::Lower>().operatorNorm();
    };
    double period = 0.0;
    for (const auto& term : rotating_terms) {
        if (term.frequency != 0.0) period = std::max(period, kTwoPi / std::abs(term.frequency));
    }
    if (rotating_terms.empty() || period == 0.0) return spectral_norm(evaluate(0.0));
    const int samples = 32;
    double best = 0.0;
    for (int k = 0; k < samples; ++k) {
        best = std::max(best, spectral_norm(evaluate(period * k / samples)));
    }
    return best;
}

HamiltonianModel build_hamiltonian(const DeviceConfig& config, Frame frame,
                                   const CompositeBasis& basis, GPrimeFormula formula) {
    config.validate();
    if (basis.num_modes() != config.num_modes()) {
        throw std::invalid_argument("build_hamiltonian: basis has " +
                                    std::to_string(basis.num_modes()) + " modes, device has " +
                                    std::to_string(config.num_modes()));
    }
    const int d = basis.dim();
    const int bus = config.bus_mode();

    HamiltonianModel h{frame, basis, CMatrix::Zero(d, d), {}};

    switch (frame) {
        case Frame::lab: {
            h.static_part = config.bus_omega * number_op(bus, basis);
            const CMatrix a_dag = creation_op(bus, basis);
            for (int j = 0; j < config.num_resonators(); ++j) {
                const auto& r = config.resonators[j];
                h.static_part += r.omega * number_op(j, basis);
                if (r.g != 0.0) {
                    const CMatrix exch = r.g * (a_dag * annihilation_op(j, basis));
                    h.static_part += exch + exch.adjoint();
                }
            }
            break;
        }
        case Frame::interaction: {
            const CMatrix a_dag = creation_op(bus, basis);
            for (int j = 0; j < config.num_resonators(); ++j) {
                const auto& r = config.resonators[j];
                if (r.g == 0.0) continue;
                h.rotating_terms.push_back(
                    {r.g * (a_dag * annihilation_op(j, basis)), config.delta(j)});
            }
            break;
        }
        case Frame::effective: {
            if (config.num_resonators() < 2 || config.num_resonators() % 2 != 0) {
                throw ConfigError(
                    "effective frame requires an even number of resonators (coupled pairs)");
            }
            for (int j = 0; j + 1 < config.num_resonators(); j += 2) {
                const EffectiveParams p = effective_params(config, {j, j + 1}, formula);
                // g'(b1^+ b2 e^{+i delta t} + b1 b2^+ e^{-i delta t}); as a
                // rotating term this is T = g' b1 b2^+ at frequency delta.
                h.rotating_terms.push_back(
                    {p.g_prime * (annihilation_op(j, basis) * creation_op(j + 1, basis)),
                     p.delta});
            }
            break;
        }
    }
    return h;
}

double q_to_kappa(double q, double omega) {
    if (q <= 0.0 || omega <= 0.0) {
        throw ConfigError("q_to_kappa: Q and omega must be positive");
    }
    return omega / q;
}

double kappa_to_q(double kappa, double omega) {
    if (kappa <= 0.0 || omega <= 0.0) {
        throw ConfigError("kappa_to_q: kappa and omega must be positive");
    }
    return omega / kappa;
}

}  // namespace busqed
