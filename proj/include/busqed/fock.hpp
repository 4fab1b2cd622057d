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

#include "busqed/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace busqed {

// Occupation-number basis of a truncated multimode bosonic space.
//
// Mode order is fixed by convention: storage resonators in configuration
// order, bus last. The full basis enumerates occupation tuples row-major with
// the last mode varying fastest. The sector-restricted variant keeps only
// tuples with total excitation <= max_total_excitation, ordered by ascending
// total excitation and row-major within each sector.
class CompositeBasis {
public:
    explicit CompositeBasis(std::vector<int> mode_dims);
    CompositeBasis(std::vector<int> mode_dims, int max_total_excitation);

    int num_modes() const { return static_cast<int>(dims_.size()); }
    int dim() const { return static_cast<int>(occupations_.size()) / num_modes(); }
    int mode_dim(int mode) const;
    const std::vector<int>& mode_dims() const { return dims_; }
    std::optional<int> max_total_excitation() const { return cutoff_; }
    bool restricted() const { return cutoff_.has_value(); }

    // index -> occupation tuple (valid as long as the basis lives)
    std::span<const int> occupations(int index) const;
    int total_excitation(int index) const { return totals_[index]; }

    // occupation tuple -> index; -1 when the tuple is outside the basis
    int index_of(std::span<const int> occ) const;
    bool contains(std::span<const int> occ) const { return index_of(occ) >= 0; }

    // Index of the basis state with `mode` lowered/raised by one photon,
    // or -1 when that state is outside the basis.
    int lowered_index(int index, int mode) const;
    int raised_index(int index, int mode) const;

    bool same_modes(const CompositeBasis& other) const { return dims_ == other.dims_; }
    bool operator==(const CompositeBasis& other) const {
        return dims_ == other.dims_ && cutoff_ == other.cutoff_;
    }

private:
    void build();
    int flat_index(std::span<const int> occ) const;

    std::vector<int> dims_;
    std::optional<int> cutoff_;
    std::vector<int> strides_;      // row-major, last mode fastest
    std::vector<int> occupations_;  // dim x num_modes, row-major
    std::vector<int> totals_;       // per basis state
    std::vector<int> lookup_;       // flat product-space index -> basis index or -1
};

struct StateVector {
    CompositeBasis basis;
    CVector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
    CompositeBasis basis;
    CMatrix matrix;

    double trace_deviation() const { return std::abs(matrix.trace() - Complex(1.0)); }
    double hermiticity() const { return hermiticity_deviation(matrix); }
    // Smallest eigenvalue; O(dim^3), intended for on-demand checks only.
    double min_eigenvalue() const;
};

DensityMatrix pure_density(const StateVector& psi);

// Annihilation operator of `mode` embedded in the composite basis,
// <n-1|a|n> = sqrt(n). In a sector-restricted basis it maps sector N into
// sector N-1 (always inside the basis).
CMatrix annihilation_op(int mode, const CompositeBasis& basis);
CMatrix creation_op(int mode, const CompositeBasis& basis);
CMatrix number_op(int mode, const CompositeBasis& basis);
CMatrix total_number_op(const CompositeBasis& basis);

// Unit basis vector for an occupation tuple.
StateVector basis_state(std::span<const int> occupations, const CompositeBasis& basis);
StateVector basis_state(std::initializer_list<int> occupations, const CompositeBasis& basis);

// Moves amplitudes between the full basis and a sector-restricted basis over
// the same modes. Projection raises IntegratorError when any amplitude
// outside the sector exceeds `leakage_tol` (truncation leakage).
StateVector project_to_sector(const StateVector& full_state, const CompositeBasis& restricted,
                              double leakage_tol = 1e-10);
StateVector embed_from_sector(const StateVector& sector_state, const CompositeBasis& full);
DensityMatrix embed_from_sector(const DensityMatrix& sector_rho, const CompositeBasis& full);

// Partial trace keeping `keep_modes` (ascending, distinct). The reduced state
// lives on the full basis of the kept modes.
DensityMatrix partial_trace_keep(const DensityMatrix& rho, std::span<const int> keep_modes);

}  // namespace busqed
