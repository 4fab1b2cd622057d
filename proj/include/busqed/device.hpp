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

#include <string>
#include <utility>
#include <vector>

namespace busqed {

enum class Frame { lab, interaction, effective };
enum class GPrimeFormula { paper, half };

std::string to_string(Frame f);
std::string to_string(GPrimeFormula f);
Frame frame_from_string(const std::string& s);
GPrimeFormula gprime_formula_from_string(const std::string& s);

// One storage resonator coupled to the bus.
struct ResonatorSpec {
    std::string label;
    double omega = 0.0;  // rad/s, > 0
    double g = 0.0;      // bus coupling, rad/s, >= 0
    double kappa = 0.0;  // decay rate, 1/s, >= 0
    int fock_dim = 2;
};

// Bus plus storage resonators. Internally everything is angular (rad/s);
// conversion from lab units happens at the config boundary.
struct DeviceConfig {
    double bus_omega = 0.0;
    double bus_kappa = 0.0;
    int bus_fock_dim = 2;
    std::vector<ResonatorSpec> resonators;
    double dispersive_warn_threshold = 0.2;

    int num_resonators() const { return static_cast<int>(resonators.size()); }
    int num_modes() const { return num_resonators() + 1; }
    int bus_mode() const { return num_resonators(); }
    double delta(int j) const { return resonators.at(j).omega - bus_omega; }

    // Resonators in config order, bus last.
    std::vector<int> mode_dims() const;
    CompositeBasis full_basis() const { return CompositeBasis(mode_dims()); }
    CompositeBasis sector_basis(int max_total_excitation) const {
        return CompositeBasis(mode_dims(), max_total_excitation);
    }

    void validate() const;  // throws ConfigError on hard violations
};

// Warnings for couplings outside the dispersive regime (|g/Delta| above the
// configured threshold). Never an error.
std::vector<std::string> dispersive_warnings(const DeviceConfig& config);

// Second-order dispersive parameters of one resonator pair.
struct EffectiveParams {
    double g_prime = 0.0;         // rad/s
    double chi1 = 0.0;            // g1^2/Delta1, rad/s
    double chi2 = 0.0;
    double bus_omega_shifted = 0.0;
    double omega1_shifted = 0.0;
    double omega2_shifted = 0.0;
    double delta = 0.0;           // omega1' - omega2'
    double rabi = 0.0;            // Omega, with Omega^2 = 4 g'^2 + delta^2
    GPrimeFormula formula = GPrimeFormula::half;
};

EffectiveParams effective_params(const DeviceConfig& config, std::pair<int, int> pair,
                                 GPrimeFormula formula);

// H(t) = static + sum_m (T_m e^{-i f_m t} + T_m^dagger e^{+i f_m t})
struct RotatingTerm {
    CMatrix op;
    double frequency = 0.0;  // rad/s
};

struct HamiltonianModel {
    Frame frame = Frame::interaction;
    CompositeBasis basis;
    CMatrix static_part;
    std::vector<RotatingTerm> rotating_terms;

    CMatrix evaluate(double t) const;
    // max_t ||H(t)||_2, taken from exact spectral norms sampled over one
    // period of the slowest rotating term. Used by the stability guard.
    double max_norm() const;
};

// Lab frame: all bare frequencies plus exchange couplings. Interaction frame:
// the couplings rotating at the detunings Delta_j. Effective frame: the
// dispersive pair-exchange g' terms, bus decoupled; resonators are paired
// consecutively (0,1), (2,3), ...
HamiltonianModel build_hamiltonian(const DeviceConfig& config, Frame frame,
                                   const CompositeBasis& basis,
                                   GPrimeFormula formula = GPrimeFormula::half);

// kappa = omega/Q
double q_to_kappa(double q, double omega);
double kappa_to_q(double kappa, double omega);

}  // namespace busqed
