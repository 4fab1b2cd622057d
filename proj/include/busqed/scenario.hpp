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

#include "busqed/device.hpp"
#include "busqed/dispersive.hpp"
#include "busqed/evolve.hpp"
#include "busqed/fock.hpp"
#include "busqed/timeseries.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace busqed {

// Basis-independent description of a projective observable P = <s|rho|s>.
struct PopulationTarget {
    std::string label;
    std::vector<int> occupations;
};

// Basis-independent description of a pure fidelity target.
struct TargetComponent {
    std::vector<int> occupations;
    Complex amplitude;
};

struct FidelityTarget {
    std::string label;
    std::vector<TargetComponent> components;

    StateVector to_state(const CompositeBasis& basis) const;
};

FidelityTarget bell_fidelity_target(std::string label, BellKind kind, std::pair<int, int> pair,
                                    int num_modes);
// Tensor product of Bell states on disjoint pairs, spectators and bus in
// vacuum.
FidelityTarget product_bell_target(std::string label,
                                   std::span<const std::pair<std::pair<int, int>, BellKind>> pairs,
                                   int num_modes);

struct Scenario {
    std::string name;
    DeviceConfig device;
    std::vector<int> initial_occupations;
    std::vector<PopulationTarget> population_targets;
    std::vector<FidelityTarget> targets;
    IntegratorConfig integrator;
    Frame frame = Frame::interaction;
    GPrimeFormula gprime_formula = GPrimeFormula::half;
    bool use_sector_basis = false;

    int total_initial_excitation() const;
    // Sector-restricted at the initial total excitation when
    // use_sector_basis is set, otherwise the full product basis.
    CompositeBasis basis() const;
};

// Integration and layout knobs shared by builtin scenarios and config files.
struct SimSettings {
    double dt = 1e-11;         // s
    double t_max = 100e-9;     // s
    int sample_every = 10;
    Frame frame = Frame::interaction;
    GPrimeFormula gprime_formula = GPrimeFormula::half;
    std::optional<int> fock_dim;  // per-mode override; default is exact truncation
    bool convergence_check = false;
};

// Canonical scenario layout for a device: a photon in r1 (and r3 when four
// resonators are present), Bell targets over the first pair (all product
// phase combinations over both pairs for four resonators). Mode truncation
// defaults to total initial excitations + 1, which is exact for this family
// of devices. The sector-restricted basis is selected automatically for
// composite dimensions above 64.
Scenario standard_scenario(std::string name, DeviceConfig device, const SimSettings& settings);

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);
std::vector<Scenario> builtin_scenarios();

struct OptimumPoint {
    std::string label;
    double t = 0.0;      // s, refined by a local quadratic fit
    double value = 0.0;  // F_max
};

struct PhysicalityReport {
    double max_trace_deviation = 0.0;
    double max_hermiticity_drift = 0.0;
    double min_eigenvalue = 1.0;           // over samples; only when checked
    double max_excitation_increase = 0.0;  // most positive jump of Tr(rho N) between samples
    bool positivity_checked = false;
};

struct ScenarioResult {
    std::string scenario_name;
    TimeSeries series;  // P_* columns then F_* columns
    std::vector<OptimumPoint> optima;
    int best_target = -1;  // argmax of F_max; the numerically realized phase
    PhysicalityReport physicality;
    std::optional<ConvergenceReport> convergence;
    std::vector<std::string> warnings;

    // resolved run metadata
    double dt = 0.0;
    double t_max = 0.0;
    Frame frame = Frame::interaction;
    GPrimeFormula gprime_formula = GPrimeFormula::half;
    bool sector_basis = false;
    int basis_dim = 0;
    double wall_seconds = 0.0;

    std::vector<double> sample_times;          // mirror of series.times
    std::vector<DensityMatrix> stored_states;  // only with RunOptions::store_states

    const OptimumPoint& best_optimum() const;
};

struct RunOptions {
    bool store_states = false;
    bool check_positivity = true;  // eigendecomposition at samples
};

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts = {});

// Reruns the scenario at dt/2 (samples on the same grid) and compares all
// observables.
ConvergenceReport scenario_convergence(const Scenario& s);

// Independent runs over a swept parameter, order preserved. Paths address
// lab-unit fields: "kappa_inv_us", "g_mhz", "bus.freq_ghz",
// "bus.kappa_inv_us", "resonators[k].freq_ghz", "resonators[k].g_mhz",
// "resonators[k].kappa_inv_us", "sim.dt_ns", "sim.t_max_ns".
Scenario with_parameter(const Scenario& base, const std::string& path, double value);
std::vector<ScenarioResult> sweep(const Scenario& base, const std::string& path,
                                  std::span<const double> values, const RunOptions& opts = {});

// |g'| fitted from a population-swap curve P(t) ~ sin^2(|g'| t): the curve is
// smoothed over `smooth_window` (to average out the |Delta| ripples) and the
// first rising half-maximum crossing t_half gives |g'| = pi/(4 t_half).
double fit_swap_gprime(std::span<const double> times, std::span<const double> population,
                       double smooth_window = 2e-9);

struct GPrimeResolution {
    GPrimeFormula winner = GPrimeFormula::half;
    double fitted_gprime = 0.0;  // rad/s, magnitude
    double paper_gprime = 0.0;   // rad/s, signed
    double half_gprime = 0.0;
    double paper_rel_err = 0.0;
    double half_rel_err = 0.0;
    bool unique_match = false;  // exactly one variant within 5 %
};

// Empirical resolution of the g' formula: closed-system swap on the device
// with decay off, fitted against both formula variants.
GPrimeResolution resolve_gprime_formula(const DeviceConfig& device, std::pair<int, int> pair,
                                        double dt = 1e-11);

struct RippleFit {
    double amplitude = 0.0;  // max residual after detrending
    double omega = 0.0;      // dominant residual frequency, rad/s
};

// Detrends a sampled curve with a moving average over `smooth_window` and
// locates the dominant residual frequency in [omega_lo, omega_hi].
RippleFit fit_ripple(std::span<const double> times, std::span<const double> values,
                     double smooth_window, double omega_lo, double omega_hi);

}  // namespace busqed
