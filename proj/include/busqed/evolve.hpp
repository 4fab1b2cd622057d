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
#include "busqed/fock.hpp"
#include "busqed/timeseries.hpp"
#include "busqed/types.hpp"

#include <functional>
#include <vector>

namespace busqed {

// One Lindblad decay channel: kappa D[L]rho with
// D[L]rho = (2 L rho L^+ - L^+ L rho - rho L^+ L)/2.
struct CollapseChannel {
    CMatrix op;
    double rate = 0.0;  // 1/s
};

// Fixed-step RK4 setup. The stability guard dt * ||H|| <= 0.05 is checked
// when an evolution starts.
struct IntegratorConfig {
    double dt = 1e-11;       // s (0.01 ns)
    double t_max = 0.0;      // s
    int sample_every = 10;   // steps between samples (t = 0 always sampled)
    bool convergence_check = false;  // run_scenario reruns at dt/2 and compares
};

template <typename StateT>
struct Trajectory {
    std::vector<double> times;  // s
    std::vector<StateT> states;
};

struct ClosedRun {
    Trajectory<StateVector> samples;  // renormalized for reporting
    double max_norm_drift = 0.0;      // raw | ||psi|| - 1 |
};

struct LindbladRun {
    Trajectory<DensityMatrix> samples;
    double max_trace_drift = 0.0;
    double max_hermiticity_drift = 0.0;  // per-step deviation before resymmetrization
};

struct LindbladStats {
    double max_trace_drift = 0.0;
    double max_hermiticity_drift = 0.0;
    long long steps = 0;
};

// i dpsi/dt = H(t) psi. Raises IntegratorError when the raw norm drifts by
// more than 1e-6 (dt too coarse).
ClosedRun evolve_closed(const HamiltonianModel& h, const StateVector& psi0,
                        const IntegratorConfig& cfg);

// drho/dt = -i[H(t),rho] + sum_k kappa_k D[L_k]rho. Hermiticity is restored
// every step; the trace is never renormalized and a drift above 1e-7 raises
// IntegratorError.
LindbladRun evolve_lindblad(const HamiltonianModel& h, const DensityMatrix& rho0,
                            const std::vector<CollapseChannel>& channels,
                            const IntegratorConfig& cfg);

// Streaming variant: the observer sees rho at t = 0 and every
// cfg.sample_every steps, without the run being stored.
using DensityObserver = std::function<void(double t, const CMatrix& rho)>;
LindbladStats evolve_lindblad_observe(const HamiltonianModel& h, const DensityMatrix& rho0,
                                      const std::vector<CollapseChannel>& channels,
                                      const IntegratorConfig& cfg,
                                      const DensityObserver& observer);

struct ConvergenceReport {
    double max_deviation = 0.0;  // over all shared observables and samples
    bool passed = false;         // max_deviation < 1e-6
};

// Compares the sampled observables of two runs of the same setup that differ
// only in dt (the halved run sampled on the same time grid).
ConvergenceReport convergence_check(const TimeSeries& run, const TimeSeries& dt_halved_run);

}  // namespace busqed
