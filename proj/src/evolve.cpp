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

#include "busqed/evolve.hpp"

#include "busqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace busqed {

namespace {

constexpr double kStabilityGuard = 0.05;
constexpr double kNormDriftLimit = 1e-6;
constexpr double kTraceDriftLimit = 1e-7;

// Compact form of an operator with at most one nonzero per column. Every
// operator this engine meets in practice (embedded ladder monomials, their
// products, number operators) has this shape, which turns the O(dim^3)
// multiplications of the Lindblad right-hand side into O(nnz * dim) sweeps.
// Anything else falls back to dense products.
struct ColumnMap {
    std::vector<int> col;
    std::vector<int> row;
    std::vector<Complex> val;
};

std::optional<ColumnMap> make_column_map(const CMatrix& m) {
    const int d = static_cast<int>(m.cols());
    ColumnMap cm;
    for (int c = 0; c < d; ++c) {
        int hits = 0;
        for (int r = 0; r < d; ++r) {
            if (m(r, c) != Complex(0.0)) {
                if (++hits > 1) return std::nullopt;
                cm.col.push_back(c);
                cm.row.push_back(r);
                cm.val.push_back(m(r, c));
            }
        }
    }
    return cm;
}

struct CompiledOp {
    std::optional<ColumnMap> map;
    CMatrix dense;  // used when map is empty

    explicit CompiledOp(const CMatrix& m) : map(make_column_map(m)) {
        if (!map) dense = m;
    }
};

// w += coeff * op * rho
void left_apply_add(CMatrix& w, const CompiledOp& op, Complex coeff, const CMatrix& rho) {
    if (!op.map) {
        w.noalias() += coeff * (op.dense * rho);
        return;
    }
    const auto& cm = *op.map;
    const int d = static_cast<int>(rho.cols());
    const int nnz = static_cast<int>(cm.col.size());
    for (int j = 0; j < d; ++j) {
        const Complex* rc = &rho(0, j);
        Complex* wc = &w(0, j);
        for (int k = 0; k < nnz; ++k) {
            wc[cm.row[k]] += coeff * cm.val[k] * rc[cm.col[k]];
        }
    }
}

// out += coeff * op * psi
void left_apply_add(CVector& out, const CompiledOp& op, Complex coeff, const CVector& psi) {
    if (!op.map) {
        out.noalias() += coeff * (op.dense * psi);
        return;
    }
    const auto& cm = *op.map;
    const int nnz = static_cast<int>(cm.col.size());
    for (int k = 0; k < nnz; ++k) {
        out[cm.row[k]] += coeff * cm.val[k] * psi[cm.col[k]];
    }
}

struct CompiledChannel {
    CompiledOp op;
    double rate;
};

// out += rate * L rho L^+
void dissipator_add(CMatrix& out, const CompiledChannel& ch, const CMatrix& rho, CMatrix& tmp) {
    if (!ch.op.map) {
        tmp.noalias() = ch.op.dense * rho;
        out.noalias() += ch.rate * (tmp * ch.op.dense.adjoint());
        return;
    }
    const auto& cm = *ch.op.map;
    const int nnz = static_cast<int>(cm.col.size());
    // (L rho L^+) column row[k] accumulates conj(val[k]) * L * rho(:, col[k]).
    for (int k = 0; k < nnz; ++k) {
        const Complex s = ch.rate * std::conj(cm.val[k]);
        const Complex* rc = &rho(0, cm.col[k]);
        Complex* oc = &out(0, cm.row[k]);
        for (int k2 = 0; k2 < nnz; ++k2) {
            oc[cm.row[k2]] += s * cm.val[k2] * rc[cm.col[k2]];
        }
    }
}

struct CompiledTerm {
    CompiledOp op;
    CompiledOp op_dag;
    double frequency;
};

// Right-hand side of the master equation, arranged as
//   out = -i W + (-i W)^+ + sum_k rate_k L_k rho L_k^+,
//   W = A(t) rho,   A(t) = H(t) - (i/2) sum_k rate_k L_k^+ L_k,
// which is valid because every stage state RK4 feeds in is Hermitian.
class LindbladRhs {
public:
    LindbladRhs(const HamiltonianModel& h, const std::vector<CollapseChannel>& channels)
        : dim_(h.basis.dim()), w_(CMatrix::Zero(dim_, dim_)), tmp_(CMatrix::Zero(dim_, dim_)) {
        CMatrix a_static = h.static_part.size() > 0 ? h.static_part : CMatrix::Zero(dim_, dim_);
        for (const auto& ch : channels) {
            if (ch.rate == 0.0) continue;
            a_static -= kI * (0.5 * ch.rate) * (ch.op.adjoint() * ch.op);
            channels_.push_back({CompiledOp(ch.op), ch.rate});
        }
        if (!a_static.isZero(0.0)) static_.emplace(a_static);
        for (const auto& term : h.rotating_terms) {
            terms_.push_back(
                {CompiledOp(term.op), CompiledOp(term.op.adjoint()), term.frequency});
        }
    }

    void eval(double t, const CMatrix& rho, CMatrix& out) {
        w_.setZero();
        if (static_) left_apply_add(w_, *static_, Complex(1.0), rho);
        for (const auto& term : terms_) {
            const Complex phase = std::exp(-kI * (term.frequency * t));
            left_apply_add(w_, term.op, phase, rho);
            left_apply_add(w_, term.op_dag, std::conj(phase), rho);
        }
        out = Complex(0.0, -1.0) * w_;
        out.noalias() += kI * w_.adjoint();
        for (const auto& ch : channels_) {
            dissipator_add(out, ch, rho, tmp_);
        }
    }

private:
    int dim_;
    std::optional<CompiledOp> static_;
    std::vector<CompiledTerm> terms_;
    std::vector<CompiledChannel> channels_;
    CMatrix w_;
    CMatrix tmp_;
};

// dpsi/dt = -i H(t) psi
class SchrodingerRhs {
public:
    explicit SchrodingerRhs(const HamiltonianModel& h) : dim_(h.basis.dim()) {
        if (h.static_part.size() > 0 && !h.static_part.isZero(0.0)) {
            static_.emplace(h.static_part);
        }
        for (const auto& term : h.rotating_terms) {
            terms_.push_back(
                {CompiledOp(term.op), CompiledOp(term.op.adjoint()), term.frequency});
        }
    }

    void eval(double t, const CVector& psi, CVector& out) {
        out.setZero();
        if (static_) left_apply_add(out, *static_, Complex(0.0, -1.0), psi);
        for (const auto& term : terms_) {
            const Complex phase = std::exp(-kI * (term.frequency * t));
            left_apply_add(out, term.op, Complex(0.0, -1.0) * phase, psi);
            left_apply_add(out, term.op_dag, Complex(0.0, -1.0) * std::conj(phase), psi);
        }
    }

private:
    int dim_;
    std::optional<CompiledOp> static_;
    std::vector<CompiledTerm> terms_;
};

void symmetrize(CMatrix& m) {
    const int d = static_cast<int>(m.rows());
    for (int j = 0; j < d; ++j) {
        m(j, j) = Complex(m(j, j).real(), 0.0);
        for (int i = j + 1; i < d; ++i) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
}

long long step_count(const IntegratorConfig& cfg) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("integrator dt must be positive");
    if (cfg.t_max < 0.0) throw std::invalid_argument("integrator t_max must be >= 0");
    if (cfg.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    return std::llround(cfg.t_max / cfg.dt);
}

void check_stability(const HamiltonianModel& h, const IntegratorConfig& cfg) {
    const double product = cfg.dt * h.max_norm();
    if (product > kStabilityGuard) {
        throw IntegratorError("stability guard: dt * ||H|| = " + std::to_string(product) +
                              " exceeds " + std::to_string(kStabilityGuard) +
                              " (reduce dt or switch frame)");
    }
}

}  // namespace

ClosedRun evolve_closed(const HamiltonianModel& h, const StateVector& psi0,
                        const IntegratorConfig& cfg) {
    if (!(psi0.basis == h.basis)) {
        throw std::invalid_argument("evolve_closed: state and Hamiltonian bases differ");
    }
    check_stability(h, cfg);
    const long long nsteps = step_count(cfg);

    SchrodingerRhs rhs(h);
    const int d = h.basis.dim();
    CVector psi = psi0.amplitudes;
    CVector k1(d), k2(d), k3(d), k4(d), stage(d);

    ClosedRun run;
    auto sample = [&](double t) {
        run.samples.times.push_back(t);
        run.samples.states.push_back({h.basis, psi / psi.norm()});
    };
    sample(0.0);

    for (long long s = 1; s <= nsteps; ++s) {
        const double t = static_cast<double>(s - 1) * cfg.dt;
        rhs.eval(t, psi, k1);
        stage = psi + (0.5 * cfg.dt) * k1;
        rhs.eval(t + 0.5 * cfg.dt, stage, k2);
        stage = psi + (0.5 * cfg.dt) * k2;
        rhs.eval(t + 0.5 * cfg.dt, stage, k3);
        stage = psi + cfg.dt * k3;
        rhs.eval(t + cfg.dt, stage, k4);
        psi += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double drift = std::abs(psi.norm() - 1.0);
        run.max_norm_drift = std::max(run.max_norm_drift, drift);
        if (drift > kNormDriftLimit) {
            throw IntegratorError("evolve_closed: norm drift " + std::to_string(drift) +
                                  " at t = " + std::to_string(s_to_ns(s * cfg.dt)) +
                                  " ns exceeds 1e-6 (dt too coarse)");
        }
        if (s % cfg.sample_every == 0) sample(static_cast<double>(s) * cfg.dt);
    }
    return run;
}

LindbladStats evolve_lindblad_observe(const HamiltonianModel& h, const DensityMatrix& rho0,
                                      const std::vector<CollapseChannel>& channels,
                                      const IntegratorConfig& cfg,
                                      const DensityObserver& observer) {
    if (!(rho0.basis == h.basis)) {
        throw std::invalid_argument("evolve_lindblad: state and Hamiltonian bases differ");
    }
    const int d = h.basis.dim();
    for (const auto& ch : channels) {
        if (ch.op.rows() != d || ch.op.cols() != d) {
            throw std::invalid_argument("evolve_lindblad: collapse operator dimension mismatch");
        }
        if (ch.rate < 0.0) {
            throw std::invalid_argument("evolve_lindblad: collapse rate must be >= 0");
        }
    }
    check_stability(h, cfg);
    const long long nsteps = step_count(cfg);

    LindbladRhs rhs(h, channels);
    CMatrix rho = rho0.matrix;
    CMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

    LindbladStats stats;
    if (observer) observer(0.0, rho);

    for (long long s = 1; s <= nsteps; ++s) {
        const double t = static_cast<double>(s - 1) * cfg.dt;
        rhs.eval(t, rho, k1);
        stage = rho + (0.5 * cfg.dt) * k1;
        rhs.eval(t + 0.5 * cfg.dt, stage, k2);
        stage = rho + (0.5 * cfg.dt) * k2;
        rhs.eval(t + 0.5 * cfg.dt, stage, k3);
        stage = rho + cfg.dt * k3;
        rhs.eval(t + cfg.dt, stage, k4);
        rho += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const bool sampling = (s % cfg.sample_every == 0);
        if (sampling) {
            stats.max_hermiticity_drift =
                std::max(stats.max_hermiticity_drift, hermiticity_deviation(rho));
        }
        symmetrize(rho);

        const double trace_drift = std::abs(rho.trace() - Complex(1.0));
        stats.max_trace_drift = std::max(stats.max_trace_drift, trace_drift);
        if (trace_drift > kTraceDriftLimit) {
            throw IntegratorError("evolve_lindblad: trace drift " + std::to_string(trace_drift) +
                                  " at t = " + std::to_string(s_to_ns(s * cfg.dt)) +
                                  " ns exceeds 1e-7 (dt too coarse)");
        }
        if (sampling && observer) observer(static_cast<double>(s) * cfg.dt, rho);
    }
    stats.steps = nsteps;
    return stats;
}

LindbladRun evolve_lindblad(const HamiltonianModel& h, const DensityMatrix& rho0,
                            const std::vector<CollapseChannel>& channels,
                            const IntegratorConfig& cfg) {
    LindbladRun run;
    const auto stats = evolve_lindblad_observe(
        h, rho0, channels, cfg, [&](double t, const CMatrix& rho) {
            run.samples.times.push_back(t);
            run.samples.states.push_back({h.basis, rho});
        });
    run.max_trace_drift = stats.max_trace_drift;
    run.max_hermiticity_drift = stats.max_hermiticity_drift;
    return run;
}

ConvergenceReport convergence_check(const TimeSeries& run, const TimeSeries& dt_halved_run) {
    if (run.labels != dt_halved_run.labels) {
        throw std::invalid_argument("convergence_check: runs sample different observables");
    }
    const std::size_t n = std::min(run.num_samples(), dt_halved_run.num_samples());
    ConvergenceReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const double ta = run.times[i];
        const double tb = dt_halved_run.times[i];
        if (std::abs(ta - tb) > 1e-15 + 1e-9 * std::abs(ta)) {
            throw std::invalid_argument("convergence_check: sample grids differ");
        }
        for (std::size_t k = 0; k < run.labels.size(); ++k) {
            report.max_deviation = std::max(
                report.max_deviation, std::abs(run.columns[k][i] - dt_halved_run.columns[k][i]));
        }
    }
    report.passed = report.max_deviation < 1e-6;
    return report;
}

}  // namespace busqed
