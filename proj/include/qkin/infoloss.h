// Copyright 2026 The qkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Informationally complete measurement sets, outcome statistics,
/// linear-inversion tomography, the independent-outcome product measure,
/// and a simulated measure -> statistics -> prepare channel.

#ifndef QKIN_INFOLOSS_H
#define QKIN_INFOLOSS_H

#include <cstdint>
#include <string>
#include <vector>

#include "qkin/event_space.h"
#include "qkin/linalg.h"

namespace qkin {

/// Coordinates of a Hermitian d x d matrix in the Hilbert-Schmidt
/// orthonormal basis {|j><j|, (|j><k| + |k><j|)/sqrt2, i(|j><k| - |k><j|)/sqrt2}.
std::vector<double> hermitian_coordinates(const ComplexMatrix &h);
ComplexMatrix hermitian_from_coordinates(std::span<const double> x, std::size_t dim);

/// Rank of the span of all PVM elements inside the d^2-dimensional real
/// space of Hermitian operators.
std::size_t completeness_rank(std::span<const PVM> observables, std::size_t dim);

class FiducialSet {
   public:
    /// Throws InvariantError unless completeness_rank == dim^2.
    explicit FiducialSet(std::vector<PVM> observables);

    std::size_t dim() const { return observables_.front().dim(); }
    const std::vector<PVM> &observables() const { return observables_; }

   private:
    std::vector<PVM> observables_;
};

/// Eigenbases of sigma_z, sigma_x, sigma_y (in that order), outcomes "+", "-".
FiducialSet qubit_fiducial_set();

/// Computational basis plus, for every pair j < k, the bases
/// {(|j> + |k>)/sqrt2, (|j> - |k>)/sqrt2, rest} and
/// {(|j> + i|k>)/sqrt2, (|j> - i|k>)/sqrt2, rest}: 1 + d(d-1) PVMs of d
/// outcomes each.
/// Throws DimensionError unless 2 <= d <= tolerances().max_fiducial_dim.
FiducialSet general_fiducial_set(std::size_t d);

struct ObservableStatistics {
    std::string label;
    std::vector<std::string> outcomes;
    std::vector<double> probabilities;
    /// Sampled tables only.
    std::vector<std::uint64_t> counts;
};

struct Provenance {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

class ProbabilityTable {
   public:
    /// Exact: distributions nonnegative and summing to 1 within 1e-9.
    /// Sampled: counts present, summing to n, with probabilities = counts / n.
    ProbabilityTable(std::vector<ObservableStatistics> observables, Provenance provenance);

    const std::vector<ObservableStatistics> &observables() const { return observables_; }
    const Provenance &provenance() const { return provenance_; }

   private:
    std::vector<ObservableStatistics> observables_;
    Provenance provenance_;
};

ProbabilityTable exact_statistics(const DensityOperator &rho, const FiducialSet &f);

/// n independent draws per observable; observable m uses the sub-seed
/// derive_seed(seed, m).
ProbabilityTable sampled_statistics(const DensityOperator &rho, const FiducialSet &f, std::uint64_t n,
                                    std::uint64_t seed);

struct Reconstruction {
    DensityOperator state;
    /// Trace distance between the least-squares Hermitian estimate and the
    /// returned state.
    double projection_distance = 0;
    bool flagged = false;
};

/// Least-squares Hermitian solve followed by eigenvalue clipping and trace
/// renormalization. Throws DimensionError if the table is not shaped by f,
/// InvariantError on rank deficiency or when no eigenvalue is positive.
Reconstruction reconstruct_state_detailed(const ProbabilityTable &table, const FiducialSet &f);
/// Same, but a flagged (infeasible) table throws InvariantError.
DensityOperator reconstruct_state(const ProbabilityTable &table, const FiducialSet &f);

/// Joint distribution over the product of all outcome sets, first
/// observable most significant.
struct ClassicalJoint {
    std::vector<std::size_t> shape;
    std::vector<double> probabilities;

    std::size_t atom_count() const { return probabilities.size(); }
    std::vector<double> marginal(std::size_t observable) const;
};

/// P(a, b, ...) = P(a|A) P(b|B) ... Throws DimensionError when the atom
/// count would exceed tolerances().max_product_atoms.
ClassicalJoint product_measure(const ProbabilityTable &table);

struct PipelineReport {
    DensityOperator prepared;
    /// Non-selective post-measurement state of the copies measured by each
    /// observable, with the number of such copies.
    std::vector<DensityOperator> disturbed_states;
    std::vector<std::uint64_t> copies_per_observable;
    /// Mean trace distance between source and post-measurement ensemble state.
    double disturbance = 0;
    /// Mean trace distance between source and outcome-conditioned posterior.
    double selective_disturbance = 0;
    double clone_fidelity = 0;
    double clone_distance = 0;
    /// Observables that received no copies; their rows fall back to uniform.
    std::size_t unmeasured_observables = 0;
    bool projection_flagged = false;
    ProbabilityTable table;
};

/// Measures each of n copies with a uniformly chosen fiducial PVM (copy i
/// uses sub-seed derive_seed(seed, i)), Lüders-updates it, and reconstructs
/// a state from the observed frequencies. Copies are independent, so
/// `threads` only changes the schedule, never the result.
PipelineReport measure_prepare_pipeline(const DensityOperator &source, const FiducialSet &f, std::uint64_t n,
                                        std::uint64_t seed, unsigned threads = 1);

/// |<e|f>|^(2n): the transition probability between |e>^(x)n and |f>^(x)n.
double tensor_power_overlap(const StateVector &e, const StateVector &f, unsigned n);

}  // namespace qkin

#endif
