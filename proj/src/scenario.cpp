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

#include "busqed/scenario.hpp"

#include "busqed/errors.hpp"
#include "busqed/observables.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace busqed {

namespace {

constexpr double kImagResidueLimit = 1e-10;
constexpr double kNegativeEigenvalueLimit = -1e-6;

std::string key_of(BellKind k) { return k == BellKind::plus ? "p" : "m"; }

DeviceConfig paper_trq_device(double kappa_inv_us) {
    const double kappa = inv_us_to_rate(kappa_inv_us);
    DeviceConfig d;
    d.bus_omega = ghz_to_rad(6.25);
    d.bus_kappa = kappa;
    d.resonators = {
        {"r1", ghz_to_rad(5.75), mhz_to_rad(50.0), kappa, 2},
        {"r2", ghz_to_rad(5.75), mhz_to_rad(50.0), kappa, 2},
    };
    return d;
}

DeviceConfig paper_frq_device() {
    DeviceConfig d = paper_trq_device(10.0);
    const double kappa = inv_us_to_rate(10.0);
    d.resonators.push_back({"r3", ghz_to_rad(6.75), mhz_to_rad(50.0), kappa, 2});
    d.resonators.push_back({"r4", ghz_to_rad(6.75), mhz_to_rad(50.0), kappa, 2});
    return d;
}

OptimumPoint refine_optimum(const std::vector<double>& t, const std::vector<double>& y,
                            const std::string& label) {
    const std::size_t n = y.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (y[i] > y[best]) best = i;
    }
    OptimumPoint p{label, t[best], y[best]};
    if (best > 0 && best + 1 < n) {
        // local quadratic through the best sample and its neighbours
        const double y1 = y[best - 1], y2 = y[best], y3 = y[best + 1];
        const double denom = y1 - 2.0 * y2 + y3;
        if (denom < 0.0) {
            const double offset = 0.5 * (y1 - y3) / denom;
            if (std::abs(offset) <= 1.0) {
                const double h = 0.5 * (t[best + 1] - t[best - 1]);
                p.t = t[best] + offset * h;
                p.value = y2 - (y3 - y1) * (y3 - y1) / (8.0 * denom);
            }
        }
    }
    return p;
}

}  // namespace

StateVector FidelityTarget::to_state(const CompositeBasis& basis) const {
    CVector amp = CVector::Zero(basis.dim());
    for (const auto& c : components) {
        const int idx = basis.index_of(c.occupations);
        if (idx < 0) {
            throw ConfigError("fidelity target '" + label + "' has a component outside the basis");
        }
        amp[idx] += c.amplitude;
    }
    if (std::abs(amp.norm() - 1.0) > 1e-9) {
        throw ConfigError("fidelity target '" + label + "' is not normalized");
    }
    return {basis, std::move(amp)};
}

FidelityTarget bell_fidelity_target(std::string label, BellKind kind, std::pair<int, int> pair,
                                    int num_modes) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex sign = kind == BellKind::plus ? kI : -kI;
    std::vector<int> occ(num_modes, 0);
    FidelityTarget t{std::move(label), {}};
    occ[pair.first] = 0;
    occ[pair.second] = 1;
    t.components.push_back({occ, Complex(inv_sqrt2)});
    occ[pair.first] = 1;
    occ[pair.second] = 0;
    t.components.push_back({occ, sign * inv_sqrt2});
    return t;
}

FidelityTarget product_bell_target(std::string label,
                                   std::span<const std::pair<std::pair<int, int>, BellKind>> pairs,
                                   int num_modes) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    FidelityTarget t{std::move(label), {{std::vector<int>(num_modes, 0), Complex(1.0)}}};
    for (const auto& [pair, kind] : pairs) {
        const Complex sign = kind == BellKind::plus ? kI : -kI;
        std::vector<TargetComponent> expanded;
        for (const auto& c : t.components) {
            TargetComponent lo = c;  // |0>_j |1>_k branch
            lo.occupations[pair.first] = 0;
            lo.occupations[pair.second] = 1;
            lo.amplitude *= inv_sqrt2;
            TargetComponent hi = c;  // |1>_j |0>_k branch
            hi.occupations[pair.first] = 1;
            hi.occupations[pair.second] = 0;
            hi.amplitude *= sign * inv_sqrt2;
            expanded.push_back(std::move(lo));
            expanded.push_back(std::move(hi));
        }
        t.components = std::move(expanded);
    }
    return t;
}

int Scenario::total_initial_excitation() const {
    return std::accumulate(initial_occupations.begin(), initial_occupations.end(), 0);
}

CompositeBasis Scenario::basis() const {
    if (use_sector_basis) return device.sector_basis(total_initial_excitation());
    return device.full_basis();
}

Scenario standard_scenario(std::string name, DeviceConfig device, const SimSettings& settings) {
    const int nr = device.num_resonators();
    if (nr < 2) {
        throw ConfigError("scenario '" + name + "' needs at least two resonators");
    }
    for (int j = 0; j < nr; ++j) {
        if (device.resonators[j].label.empty()) {
            device.resonators[j].label = "r" + std::to_string(j + 1);
        }
    }

    Scenario s;
    s.name = std::move(name);
    s.initial_occupations.assign(nr + 1, 0);
    s.initial_occupations[0] = 1;
    if (nr == 4) s.initial_occupations[2] = 1;
    const int total = std::accumulate(s.initial_occupations.begin(), s.initial_occupations.end(), 0);

    const int fock_dim = settings.fock_dim.value_or(total + 1);
    if (fock_dim < 2) throw ConfigError("fock_dim must be >= 2");
    for (auto& r : device.resonators) r.fock_dim = fock_dim;
    device.bus_fock_dim = fock_dim;
    device.validate();

    const auto& res = device.resonators;
    if (nr == 4) {
        // Populations of the four photon-pair locations, fidelities against
        // every phase combination of the two Bell pairs.
        for (int a : {0, 1}) {
            for (int b : {2, 3}) {
                std::vector<int> occ(nr + 1, 0);
                occ[a] = 1;
                occ[b] = 1;
                s.population_targets.push_back({res[a].label + res[b].label, occ});
            }
        }
        for (BellKind k1 : {BellKind::plus, BellKind::minus}) {
            for (BellKind k2 : {BellKind::plus, BellKind::minus}) {
                const std::vector<std::pair<std::pair<int, int>, BellKind>> pairs = {
                    {{0, 1}, k1}, {{2, 3}, k2}};
                s.targets.push_back(
                    product_bell_target("prod_" + key_of(k1) + key_of(k2), pairs, nr + 1));
            }
        }
    } else {
        for (int j = 0; j < nr; ++j) {
            std::vector<int> occ(nr + 1, 0);
            occ[j] = 1;
            s.population_targets.push_back({res[j].label, occ});
        }
        s.targets.push_back(bell_fidelity_target("bell_plus", BellKind::plus, {0, 1}, nr + 1));
        s.targets.push_back(bell_fidelity_target("bell_minus", BellKind::minus, {0, 1}, nr + 1));
    }

    long long dim = 1;
    for (int d : device.mode_dims()) dim *= d;
    s.use_sector_basis = dim > 64;

    s.device = std::move(device);
    s.integrator.dt = settings.dt;
    s.integrator.t_max = settings.t_max;
    s.integrator.sample_every = settings.sample_every;
    s.integrator.convergence_check = settings.convergence_check;
    s.frame = settings.frame;
    s.gprime_formula = settings.gprime_formula;
    return s;
}

std::vector<std::string> builtin_scenario_names() {
    return {"trq_fig2", "trq_fig2_fastdecay", "frq_fig3"};
}

Scenario builtin_scenario(const std::string& name) {
    SimSettings settings;
    if (name == "trq_fig2") {
        settings.t_max = ns_to_s(100.0);
        return standard_scenario(name, paper_trq_device(10.0), settings);
    }
    if (name == "trq_fig2_fastdecay") {
        settings.t_max = ns_to_s(100.0);
        return standard_scenario(name, paper_trq_device(3.0), settings);
    }
    if (name == "frq_fig3") {
        settings.t_max = ns_to_s(50.0);
        return standard_scenario(name, paper_frq_device(), settings);
    }
    throw ConfigError("unknown scenario '" + name + "' (see list-scenarios)");
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> all;
    for (const auto& name : builtin_scenario_names()) all.push_back(builtin_scenario(name));
    return all;
}

const OptimumPoint& ScenarioResult::best_optimum() const {
    if (best_target < 0 || best_target >= static_cast<int>(optima.size())) {
        throw std::logic_error("scenario result has no fidelity optimum");
    }
    return optima[best_target];
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts) {
    const auto wall0 = std::chrono::steady_clock::now();
    s.device.validate();
    if (static_cast<int>(s.initial_occupations.size()) != s.device.num_modes()) {
        throw ConfigError("initial occupations do not match the device mode count");
    }

    const CompositeBasis basis = s.basis();
    const HamiltonianModel h = build_hamiltonian(s.device, s.frame, basis, s.gprime_formula);

    std::vector<CollapseChannel> channels;
    for (int j = 0; j < s.device.num_resonators(); ++j) {
        if (s.device.resonators[j].kappa > 0.0) {
            channels.push_back({annihilation_op(j, basis), s.device.resonators[j].kappa});
        }
    }
    if (s.device.bus_kappa > 0.0) {
        channels.push_back({annihilation_op(s.device.bus_mode(), basis), s.device.bus_kappa});
    }

    const DensityMatrix rho0 = pure_density(basis_state(s.initial_occupations, basis));

    std::vector<int> pop_idx;
    for (const auto& pt : s.population_targets) {
        const int idx = basis.index_of(pt.occupations);
        if (idx < 0) {
            throw ConfigError("population target '" + pt.label + "' outside the basis");
        }
        pop_idx.push_back(idx);
    }
    std::vector<CVector> fid_states;
    for (const auto& ft : s.targets) fid_states.push_back(ft.to_state(basis).amplitudes);

    Eigen::VectorXd totals(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) totals[i] = basis.total_excitation(i);

    ScenarioResult result;
    result.scenario_name = s.name;
    TimeSeries& ts = result.series;
    for (const auto& pt : s.population_targets) ts.labels.push_back("P_" + pt.label);
    for (const auto& ft : s.targets) ts.labels.push_back("F_" + ft.label);
    ts.columns.resize(ts.labels.size());

    PhysicalityReport& phys = result.physicality;
    phys.positivity_checked = opts.check_positivity;
    bool have_prev = false;
    double prev_excitation = 0.0;

    const auto observer = [&](double t, const CMatrix& rho) {
        ts.times.push_back(t);
        std::size_t col = 0;
        for (const int idx : pop_idx) ts.columns[col++].push_back(rho(idx, idx).real());
        for (const auto& v : fid_states) {
            const Complex form = v.dot(rho * v);
            if (std::abs(form.imag()) > kImagResidueLimit) {
                throw IntegratorError("fidelity imaginary residue " +
                                      std::to_string(form.imag()) + " exceeds 1e-10");
            }
            ts.columns[col++].push_back(form.real());
        }

        phys.max_trace_deviation =
            std::max(phys.max_trace_deviation, std::abs(rho.trace() - Complex(1.0)));
        const double excitation = (rho.diagonal().real().array() * totals.array()).sum();
        if (have_prev) {
            phys.max_excitation_increase =
                std::max(phys.max_excitation_increase, excitation - prev_excitation);
        }
        prev_excitation = excitation;
        have_prev = true;

        if (opts.check_positivity) {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
            const double min_eig = es.eigenvalues().minCoeff();
            phys.min_eigenvalue = std::min(phys.min_eigenvalue, min_eig);
            if (min_eig < kNegativeEigenvalueLimit) {
                throw IntegratorError("negative eigenvalue " + std::to_string(min_eig) +
                                      " below -1e-6 (integration failure)");
            }
        }
        if (opts.store_states) result.stored_states.push_back({basis, rho});
    };

    const LindbladStats stats = evolve_lindblad_observe(h, rho0, channels, s.integrator, observer);
    phys.max_hermiticity_drift = stats.max_hermiticity_drift;
    phys.max_trace_deviation = std::max(phys.max_trace_deviation, stats.max_trace_drift);

    const std::size_t npops = pop_idx.size();
    for (std::size_t k = 0; k < fid_states.size(); ++k) {
        result.optima.push_back(refine_optimum(ts.times, ts.columns[npops + k], s.targets[k].label));
    }
    for (std::size_t k = 0; k < result.optima.size(); ++k) {
        if (result.best_target < 0 ||
            result.optima[k].value > result.optima[result.best_target].value) {
            result.best_target = static_cast<int>(k);
        }
    }

    result.warnings = dispersive_warnings(s.device);
    result.dt = s.integrator.dt;
    result.t_max = s.integrator.t_max;
    result.frame = s.frame;
    result.gprime_formula = s.gprime_formula;
    result.sector_basis = s.use_sector_basis;
    result.basis_dim = basis.dim();
    result.sample_times = ts.times;

    if (s.integrator.convergence_check) {
        Scenario halved = s;
        halved.integrator.convergence_check = false;
        halved.integrator.dt *= 0.5;
        halved.integrator.sample_every *= 2;
        const ScenarioResult fine = run_scenario(halved, {false, false});
        result.convergence = convergence_check(ts, fine.series);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return result;
}

ConvergenceReport scenario_convergence(const Scenario& s) {
    Scenario base = s;
    base.integrator.convergence_check = false;
    Scenario halved = base;
    halved.integrator.dt *= 0.5;
    halved.integrator.sample_every *= 2;
    const RunOptions opts{false, false};
    const ScenarioResult coarse = run_scenario(base, opts);
    const ScenarioResult fine = run_scenario(halved, opts);
    return convergence_check(coarse.series, fine.series);
}

Scenario with_parameter(const Scenario& base, const std::string& path, double value) {
    Scenario s = base;
    auto set_kappa = [&](double& kappa) {
        if (value < 0.0) throw ConfigError(path + ": lifetime must be >= 0");
        kappa = inv_us_to_rate(value);
    };
    if (path == "kappa_inv_us") {
        set_kappa(s.device.bus_kappa);
        for (auto& r : s.device.resonators) set_kappa(r.kappa);
    } else if (path == "g_mhz") {
        if (value < 0.0) throw ConfigError(path + ": coupling must be >= 0");
        for (auto& r : s.device.resonators) r.g = mhz_to_rad(value);
    } else if (path == "bus.freq_ghz") {
        s.device.bus_omega = ghz_to_rad(value);
    } else if (path == "bus.kappa_inv_us") {
        set_kappa(s.device.bus_kappa);
    } else if (path == "sim.dt_ns") {
        s.integrator.dt = ns_to_s(value);
    } else if (path == "sim.t_max_ns") {
        s.integrator.t_max = ns_to_s(value);
    } else if (path.starts_with("resonators[")) {
        const auto close = path.find(']');
        if (close == std::string::npos || close + 1 >= path.size() || path[close + 1] != '.') {
            throw ConfigError("bad parameter path '" + path + "'");
        }
        int index = -1;
        try {
            index = std::stoi(path.substr(11, close - 11));
        } catch (const std::exception&) {
            throw ConfigError("bad resonator index in parameter path '" + path + "'");
        }
        if (index < 0 || index >= s.device.num_resonators()) {
            throw ConfigError("resonator index out of range in parameter path '" + path + "'");
        }
        const std::string field = path.substr(close + 2);
        auto& r = s.device.resonators[index];
        if (field == "freq_ghz") {
            r.omega = ghz_to_rad(value);
        } else if (field == "g_mhz") {
            if (value < 0.0) throw ConfigError(path + ": coupling must be >= 0");
            r.g = mhz_to_rad(value);
        } else if (field == "kappa_inv_us") {
            set_kappa(r.kappa);
        } else {
            throw ConfigError("unknown field '" + field + "' in parameter path '" + path + "'");
        }
    } else {
        throw ConfigError("unknown parameter path '" + path + "'");
    }
    s.device.validate();
    return s;
}

std::vector<ScenarioResult> sweep(const Scenario& base, const std::string& path,
                                  std::span<const double> values, const RunOptions& opts) {
    std::vector<ScenarioResult> results;
    results.reserve(values.size());
    for (const double v : values) {
        results.push_back(run_scenario(with_parameter(base, path, v), opts));
    }
    return results;
}

double fit_swap_gprime(std::span<const double> times, std::span<const double> population,
                       double smooth_window) {
    const std::size_t n = times.size();
    if (n != population.size() || n < 16) {
        throw std::runtime_error("fit_swap_gprime: too few samples");
    }
    const double dt = times[1] - times[0];
    const std::size_t half =
        static_cast<std::size_t>(std::max(0.0, std::round(smooth_window / (2.0 * dt))));
    if (2 * half + 8 > n) {
        throw std::runtime_error("fit_swap_gprime: smoothing window too large for the run");
    }

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + population[i];
    const std::size_t first = half;
    const std::size_t last = n - 1 - half;
    auto smoothed = [&](std::size_t i) {
        return (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
    };

    double lo = smoothed(first), hi = smoothed(first);
    for (std::size_t i = first; i <= last; ++i) {
        lo = std::min(lo, smoothed(i));
        hi = std::max(hi, smoothed(i));
    }
    if (hi - lo < 0.05) {
        throw std::runtime_error("fit_swap_gprime: no swap oscillation to fit");
    }
    const double threshold = lo + 0.5 * (hi - lo);
    if (smoothed(first) >= threshold) {
        throw std::runtime_error("fit_swap_gprime: population does not start below half maximum");
    }
    for (std::size_t i = first + 1; i <= last; ++i) {
        const double prev = smoothed(i - 1);
        const double cur = smoothed(i);
        if (cur >= threshold) {
            const double frac = (threshold - prev) / (cur - prev);
            const double t_half = times[i - 1] + frac * (times[i] - times[i - 1]);
            return 0.25 * std::numbers::pi / t_half;
        }
    }
    throw std::runtime_error("fit_swap_gprime: no half-maximum crossing found");
}

GPrimeResolution resolve_gprime_formula(const DeviceConfig& device, std::pair<int, int> pair,
                                        double dt) {
    device.validate();
    const EffectiveParams paper = effective_params(device, pair, GPrimeFormula::paper);
    const EffectiveParams half = effective_params(device, pair, GPrimeFormula::half);
    if (half.g_prime == 0.0) {
        throw ConfigError("resolve_gprime_formula: zero effective coupling");
    }

    // Closed-system swap: decay does not enter the Hamiltonian, so the device
    // is used as-is with evolve_closed.
    const CompositeBasis basis = device.full_basis();
    const HamiltonianModel h = build_hamiltonian(device, Frame::interaction, basis);
    std::vector<int> occ(device.num_modes(), 0);
    occ[pair.first] = 1;
    const StateVector psi0 = basis_state(occ, basis);
    occ[pair.first] = 0;
    occ[pair.second] = 1;
    const int target_idx = basis.index_of(occ);

    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_max = 2.6 * gate_time(half.g_prime);
    const long long nsteps = std::llround(cfg.t_max / cfg.dt);
    cfg.sample_every = static_cast<int>(std::max(1LL, nsteps / 8000));

    const ClosedRun run = evolve_closed(h, psi0, cfg);
    std::vector<double> p2(run.samples.states.size());
    for (std::size_t i = 0; i < p2.size(); ++i) {
        p2[i] = std::norm(run.samples.states[i].amplitudes[target_idx]);
    }

    // Smooth over the bus-interaction ripple period.
    double window = 2e-9;
    for (int j = 0; j < device.num_resonators(); ++j) {
        if (device.resonators[j].g > 0.0 && device.delta(j) != 0.0) {
            window = std::min(window, kTwoPi / std::abs(device.delta(j)));
        }
    }

    GPrimeResolution res;
    res.fitted_gprime = fit_swap_gprime(run.samples.times, p2, window);
    res.paper_gprime = paper.g_prime;
    res.half_gprime = half.g_prime;
    res.paper_rel_err =
        std::abs(res.fitted_gprime - std::abs(paper.g_prime)) / std::abs(paper.g_prime);
    res.half_rel_err =
        std::abs(res.fitted_gprime - std::abs(half.g_prime)) / std::abs(half.g_prime);
    res.winner = res.half_rel_err <= res.paper_rel_err ? GPrimeFormula::half : GPrimeFormula::paper;
    res.unique_match = (res.paper_rel_err <= 0.05) != (res.half_rel_err <= 0.05);
    return res;
}

RippleFit fit_ripple(std::span<const double> times, std::span<const double> values,
                     double smooth_window, double omega_lo, double omega_hi) {
    const std::size_t n = times.size();
    if (n != values.size() || n < 32) {
        throw std::runtime_error("fit_ripple: too few samples");
    }
    const double dt = times[1] - times[0];
    const std::size_t half =
        static_cast<std::size_t>(std::max(1.0, std::round(smooth_window / (2.0 * dt))));
    if (2 * half + 16 > n) {
        throw std::runtime_error("fit_ripple: smoothing window too large for the run");
    }

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];

    const std::size_t first = half;
    const std::size_t last = n - 1 - half;
    std::vector<double> rtimes, residual;
    rtimes.reserve(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) {
        const double mean =
            (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
        rtimes.push_back(times[i]);
        residual.push_back(values[i] - mean);
    }

    RippleFit fit;
    for (const double r : residual) fit.amplitude = std::max(fit.amplitude, std::abs(r));

    const int grid = 400;
    std::vector<double> power(grid, 0.0);
    for (int k = 0; k < grid; ++k) {
        const double omega = omega_lo + (omega_hi - omega_lo) * k / (grid - 1);
        Complex c = 0.0;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            c += residual[i] * std::exp(-kI * (omega * rtimes[i]));
        }
        power[k] = std::abs(c);
    }
    int best = 0;
    for (int k = 1; k < grid; ++k) {
        if (power[k] > power[best]) best = k;
    }
    double omega = omega_lo + (omega_hi - omega_lo) * best / (grid - 1);
    if (best > 0 && best + 1 < grid) {
        const double y1 = power[best - 1], y2 = power[best], y3 = power[best + 1];
        const double denom = y1 - 2.0 * y2 + y3;
        if (denom < 0.0) {
            const double offset = 0.5 * (y1 - y3) / denom;
            omega += offset * (omega_hi - omega_lo) / (grid - 1);
        }
    }
    fit.omega = omega;
    return fit;
}

}  // namespace busqed
