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

#include "busqed/fock.hpp"

#include "busqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace busqed {

namespace {

int checked_product(const std::vector<int>& dims) {
    long long p = 1;
    for (int d : dims) {
        p *= d;
        if (p > (1 << 24)) {
            throw std::invalid_argument("composite basis too large (product of mode dims)");
        }
    }
    return static_cast<int>(p);
}

}  // namespace

CompositeBasis::CompositeBasis(std::vector<int> mode_dims) : dims_(std::move(mode_dims)) {
    build();
}

CompositeBasis::CompositeBasis(std::vector<int> mode_dims, int max_total_excitation)
    : dims_(std::move(mode_dims)), cutoff_(max_total_excitation) {
    if (max_total_excitation < 0) {
        throw std::invalid_argument("max_total_excitation must be >= 0");
    }
    build();
}

void CompositeBasis::build() {
    if (dims_.empty()) {
        throw std::invalid_argument("composite basis needs at least one mode");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("every mode dimension must be >= 2");
        }
    }
    const int n = num_modes();
    const int full = checked_product(dims_);
    strides_.assign(n, 1);
    for (int m = n - 2; m >= 0; --m) {
        strides_[m] = strides_[m + 1] * dims_[m + 1];
    }

    lookup_.assign(full, -1);
    std::vector<int> occ(n, 0);
    if (!cutoff_) {
        occupations_.reserve(static_cast<std::size_t>(full) * n);
        totals_.reserve(full);
        for (int flat = 0; flat < full; ++flat) {
            int rem = flat;
            int total = 0;
            for (int m = 0; m < n; ++m) {
                occ[m] = rem / strides_[m];
                rem %= strides_[m];
                total += occ[m];
            }
            occupations_.insert(occupations_.end(), occ.begin(), occ.end());
            totals_.push_back(total);
            lookup_[flat] = flat;
        }
        return;
    }

    // Sector order: ascending total excitation, row-major within a sector.
    for (int sector = 0; sector <= *cutoff_; ++sector) {
        for (int flat = 0; flat < full; ++flat) {
            int rem = flat;
            int total = 0;
            for (int m = 0; m < n; ++m) {
                occ[m] = rem / strides_[m];
                rem %= strides_[m];
                total += occ[m];
            }
            if (total != sector) continue;
            lookup_[flat] = static_cast<int>(totals_.size());
            occupations_.insert(occupations_.end(), occ.begin(), occ.end());
            totals_.push_back(total);
        }
    }
}

int CompositeBasis::mode_dim(int mode) const {
    if (mode < 0 || mode >= num_modes()) {
        throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range");
    }
    return dims_[mode];
}

std::span<const int> CompositeBasis::occupations(int index) const {
    return {occupations_.data() + static_cast<std::size_t>(index) * num_modes(),
            static_cast<std::size_t>(num_modes())};
}

int CompositeBasis::flat_index(std::span<const int> occ) const {
    int flat = 0;
    for (int m = 0; m < num_modes(); ++m) {
        flat += occ[m] * strides_[m];
    }
    return flat;
}

int CompositeBasis::index_of(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != num_modes()) return -1;
    for (int m = 0; m < num_modes(); ++m) {
        if (occ[m] < 0 || occ[m] >= dims_[m]) return -1;
    }
    return lookup_[flat_index(occ)];
}

int CompositeBasis::lowered_index(int index, int mode) const {
    if (occupations(index)[mode] == 0) return -1;
    return lookup_[flat_index(occupations(index)) - strides_[mode]];
}

int CompositeBasis::raised_index(int index, int mode) const {
    if (occupations(index)[mode] + 1 >= dims_[mode]) return -1;
    return lookup_[flat_index(occupations(index)) + strides_[mode]];
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix pure_density(const StateVector& psi) {
    return {psi.basis, psi.amplitudes * psi.amplitudes.adjoint()};
}

CMatrix annihilation_op(int mode, const CompositeBasis& basis) {
    if (mode < 0 || mode >= basis.num_modes()) {
        throw std::invalid_argument("annihilation_op: mode index " + std::to_string(mode) +
                                    " out of range");
    }
    const int d = basis.dim();
    CMatrix a = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const int n = basis.occupations(i)[mode];
        if (n == 0) continue;
        a(basis.lowered_index(i, mode), i) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

CMatrix creation_op(int mode, const CompositeBasis& basis) {
    return annihilation_op(mode, basis).adjoint();
}

CMatrix number_op(int mode, const CompositeBasis& basis) {
    if (mode < 0 || mode >= basis.num_modes()) {
        throw std::invalid_argument("number_op: mode index " + std::to_string(mode) +
                                    " out of range");
    }
    const int d = basis.dim();
    CMatrix n = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        n(i, i) = static_cast<double>(basis.occupations(i)[mode]);
    }
    return n;
}

CMatrix total_number_op(const CompositeBasis& basis) {
    const int d = basis.dim();
    CMatrix n = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        n(i, i) = static_cast<double>(basis.total_excitation(i));
    }
    return n;
}

StateVector basis_state(std::span<const int> occupations, const CompositeBasis& basis) {
    if (static_cast<int>(occupations.size()) != basis.num_modes()) {
        throw std::invalid_argument("basis_state: occupation tuple has wrong number of modes");
    }
    for (int m = 0; m < basis.num_modes(); ++m) {
        if (occupations[m] < 0 || occupations[m] >= basis.mode_dim(m)) {
            throw std::invalid_argument("basis_state: occupation " +
                                        std::to_string(occupations[m]) +
                                        " exceeds truncation of mode " + std::to_string(m));
        }
    }
    const int idx = basis.index_of(occupations);
    if (idx < 0) {
        throw std::invalid_argument("basis_state: total excitation exceeds the sector cutoff");
    }
    CVector amp = CVector::Zero(basis.dim());
    amp[idx] = 1.0;
    return {basis, std::move(amp)};
}

StateVector basis_state(std::initializer_list<int> occupations, const CompositeBasis& basis) {
    return basis_state(std::span<const int>(occupations.begin(), occupations.size()), basis);
}

StateVector project_to_sector(const StateVector& full_state, const CompositeBasis& restricted,
                              double leakage_tol) {
    if (!full_state.basis.same_modes(restricted)) {
        throw std::invalid_argument("project_to_sector: bases describe different modes");
    }
    CVector amp = CVector::Zero(restricted.dim());
    double leak = 0.0;
    const CompositeBasis& full = full_state.basis;
    for (int i = 0; i < full.dim(); ++i) {
        const int k = restricted.index_of(full.occupations(i));
        if (k >= 0) {
            amp[k] = full_state.amplitudes[i];
        } else {
            leak = std::max(leak, std::abs(full_state.amplitudes[i]));
        }
    }
    if (leak > leakage_tol) {
        throw IntegratorError("project_to_sector: amplitude " + std::to_string(leak) +
                              " outside the excitation sector (truncation leakage)");
    }
    return {restricted, std::move(amp)};
}

StateVector embed_from_sector(const StateVector& sector_state, const CompositeBasis& full) {
    if (!sector_state.basis.same_modes(full)) {
        throw std::invalid_argument("embed_from_sector: bases describe different modes");
    }
    CVector amp = CVector::Zero(full.dim());
    const CompositeBasis& sec = sector_state.basis;
    for (int k = 0; k < sec.dim(); ++k) {
        const int i = full.index_of(sec.occupations(k));
        if (i < 0) {
            throw std::invalid_argument("embed_from_sector: sector state outside target basis");
        }
        amp[i] = sector_state.amplitudes[k];
    }
    return {full, std::move(amp)};
}

DensityMatrix embed_from_sector(const DensityMatrix& sector_rho, const CompositeBasis& full) {
    if (!sector_rho.basis.same_modes(full)) {
        throw std::invalid_argument("embed_from_sector: bases describe different modes");
    }
    const CompositeBasis& sec = sector_rho.basis;
    std::vector<int> map(sec.dim());
    for (int k = 0; k < sec.dim(); ++k) {
        map[k] = full.index_of(sec.occupations(k));
        if (map[k] < 0) {
            throw std::invalid_argument("embed_from_sector: sector state outside target basis");
        }
    }
    CMatrix m = CMatrix::Zero(full.dim(), full.dim());
    for (int k = 0; k < sec.dim(); ++k) {
        for (int l = 0; l < sec.dim(); ++l) {
            m(map[k], map[l]) = sector_rho.matrix(k, l);
        }
    }
    return {full, std::move(m)};
}

DensityMatrix partial_trace_keep(const DensityMatrix& rho, std::span<const int> keep_modes) {
    const CompositeBasis& basis = rho.basis;
    const int n = basis.num_modes();
    std::vector<int> keep(keep_modes.begin(), keep_modes.end());
    if (keep.empty() || !std::is_sorted(keep.begin(), keep.end()) ||
        std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw std::invalid_argument("partial_trace_keep: kept modes must be ascending, distinct");
    }
    for (int m : keep) {
        if (m < 0 || m >= n) {
            throw std::invalid_argument("partial_trace_keep: mode index out of range");
        }
    }
    std::vector<int> drop;
    for (int m = 0; m < n; ++m) {
        if (!std::binary_search(keep.begin(), keep.end(), m)) drop.push_back(m);
    }

    std::vector<int> kept_dims;
    for (int m : keep) kept_dims.push_back(basis.mode_dim(m));
    CompositeBasis reduced(kept_dims);

    const int d = basis.dim();
    std::vector<int> row_index(d);  // reduced index of the kept part of each state
    std::vector<int> kept_occ(keep.size());
    for (int i = 0; i < d; ++i) {
        auto occ = basis.occupations(i);
        for (std::size_t k = 0; k < keep.size(); ++k) kept_occ[k] = occ[keep[k]];
        row_index[i] = reduced.index_of(kept_occ);
    }

    CMatrix out = CMatrix::Zero(reduced.dim(), reduced.dim());
    for (int i = 0; i < d; ++i) {
        auto occ_i = basis.occupations(i);
        for (int j = 0; j < d; ++j) {
            auto occ_j = basis.occupations(j);
            bool same_env = true;
            for (int m : drop) {
                if (occ_i[m] != occ_j[m]) {
                    same_env = false;
                    break;
                }
            }
            if (same_env) out(row_index[i], row_index[j]) += rho.matrix(i, j);
        }
    }
    return {std::move(reduced), std::move(out)};
}

}  // namespace busqed
