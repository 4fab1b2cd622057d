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
#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace busqed;

TEST_CASE("builtin scenarios carry the published parameters") {
    const auto names = builtin_scenario_names();
    CHECK(names == std::vector<std::string>{"trq_fig2", "trq_fig2_fastdecay", "frq_fig3"});

    const Scenario trq = builtin_scenario("trq_fig2");
    CHECK(rad_to_ghz(trq.device.bus_omega) == doctest::Approx(6.25));
    CHECK(rad_to_ghz(trq.device.resonators[0].omega) == doctest::Approx(5.75));
    CHECK(rad_to_mhz(trq.device.resonators[1].g) == doctest::Approx(50.0));
    CHECK(trq.device.bus_kappa == doctest::Approx(1e5));
    CHECK(rad_to_mhz(trq.device.delta(0)) == doctest::Approx(-500.0));
    CHECK(trq.initial_occupations == std::vector<int>{1, 0, 0});
    CHECK_FALSE(trq.use_sector_basis);
    CHECK(trq.basis().dim() == 8);

    const Scenario frq = builtin_scenario("frq_fig3");
    CHECK(rad_to_mhz(frq.device.delta(2)) == doctest::Approx(500.0));
    CHECK(frq.initial_occupations == std::vector<int>{1, 0, 1, 0, 0});
    CHECK(frq.use_sector_basis);
    CHECK(frq.basis().dim() == 21);
    CHECK(frq.device.full_basis().dim() == 243);
    CHECK(frq.targets.size() == 4);

    const Scenario fast = builtin_scenario("trq_fig2_fastdecay");
    CHECK(fast.device.bus_kappa == doctest::Approx(1.0 / 3e-6));

    CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
}

TEST_CASE("TRQ run reaches a Bell state near 25 ns") {
    Scenario s = builtin_scenario("trq_fig2");
    s.integrator.t_max = ns_to_s(30.0);
    const ScenarioResult r = run_scenario(s);
    CHECK(r.basis_dim == 8);
    const OptimumPoint& best = r.best_optimum();
    // the realized phase for omega_j < omega_R
    CHECK(r.optima[r.best_target].label == "bell_minus");
    CHECK(best.value > 0.99);
    CHECK(s_to_ns(best.t) == doctest::Approx(25.0).epsilon(0.05));
    // fidelity and population columns stay inside [0, 1]
    for (const auto& col : r.series.columns) {
        for (const double v : col) {
            CHECK(v >= -1e-9);
            CHECK(v <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("single-excitation populations sum to one with the vacuum") {
    Scenario s = builtin_scenario("trq_fig2");
    s.integrator.t_max = ns_to_s(40.0);
    // add the bus and vacuum populations to close the sum
    s.population_targets.push_back({"bus", {0, 0, 1}});
    s.population_targets.push_back({"vac", {0, 0, 0}});
    const ScenarioResult r = run_scenario(s);
    const auto& p1 = r.series.column("P_r1");
    const auto& p2 = r.series.column("P_r2");
    const auto& pb = r.series.column("P_bus");
    const auto& pv = r.series.column("P_vac");
    for (std::size_t i = 0; i < r.series.num_samples(); ++i) {
        CHECK(std::abs(p1[i] + p2[i] + pb[i] + pv[i] - 1.0) <= 1e-8);
    }
}

TEST_CASE("population ripples sit at the detuning frequency") {
    Scenario s = builtin_scenario("trq_fig2");
    const ScenarioResult r = run_scenario(s);
    const auto& p2 = r.series.column("P_r2");
    const double delta = std::abs(s.device.delta(0));
    const RippleFit fit = fit_ripple(r.series.times, p2, 2e-9, 0.2 * delta, 2.0 * delta);
    CHECK(fit.amplitude < 0.05);
    CHECK(std::abs(fit.omega - delta) <= 0.2 * delta);
}

TEST_CASE("decay sweep degrades the fidelity monotonically") {
    Scenario s = builtin_scenario("trq_fig2");
    s.integrator.t_max = ns_to_s(30.0);
    const std::vector<double> lifetimes_us{10.0, 3.0};
    const auto results = sweep(s, "kappa_inv_us", lifetimes_us);
    REQUIRE(results.size() == 2);
    CHECK(results[0].best_optimum().value > results[1].best_optimum().value);

    const std::vector<double> none{};
    CHECK(sweep(s, "kappa_inv_us", none).empty());
    CHECK_THROWS_AS(with_parameter(s, "anharmonicity", 1.0), ConfigError);
    CHECK_THROWS_AS(with_parameter(s, "resonators[7].g_mhz", 1.0), ConfigError);
}

TEST_CASE("fitted g' scales quadratically with g") {
    Scenario base = builtin_scenario("trq_fig2");
    const std::vector<double> g_mhz{10.0, 20.0, 50.0};
    std::vector<double> fitted;
    for (const double g : g_mhz) {
        const Scenario s = with_parameter(base, "g_mhz", g);
        const GPrimeResolution res = resolve_gprime_formula(s.device, {0, 1});
        fitted.push_back(res.fitted_gprime);
    }
    // |g'| ~ g^2: scaling exponents within 5 %
    for (std::size_t i = 1; i < fitted.size(); ++i) {
        const double ratio = fitted[i] / fitted[0];
        const double expected = (g_mhz[i] / g_mhz[0]) * (g_mhz[i] / g_mhz[0]);
        CHECK(std::abs(ratio / expected - 1.0) < 0.05);
    }
}

TEST_CASE("g' formula resolution picks the half variant uniquely") {
    const Scenario s = builtin_scenario("trq_fig2");
    const GPrimeResolution res = resolve_gprime_formula(s.device, {0, 1});
    CHECK(res.winner == GPrimeFormula::half);
    CHECK(res.unique_match);
    CHECK(res.half_rel_err < 0.05);
    CHECK(res.paper_rel_err > 0.05);
    CHECK(rad_to_mhz(res.fitted_gprime) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("FRQ product targets are built over both pairs") {
    const Scenario frq = builtin_scenario("frq_fig3");
    const CompositeBasis basis = frq.basis();
    for (const auto& t : frq.targets) {
        const StateVector v = t.to_state(basis);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.components.size() == 4);
    }
    // orthogonal phase combinations
    const CVector a = frq.targets[0].to_state(basis).amplitudes;
    const CVector b = frq.targets[3].to_state(basis).amplitudes;
    CHECK(std::abs(a.dot(b)) < 1e-12);
}

TEST_CASE("scenario integrator overrides propagate") {
    Scenario s = builtin_scenario("trq_fig2");
    const Scenario tweaked = with_parameter(s, "sim.t_max_ns", 12.0);
    CHECK(tweaked.integrator.t_max == doctest::Approx(ns_to_s(12.0)));
    const Scenario dts = with_parameter(s, "sim.dt_ns", 0.005);
    CHECK(dts.integrator.dt == doctest::Approx(ns_to_s(0.005)));
}
