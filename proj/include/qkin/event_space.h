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

/// Events as projectors, measurement contexts as resolutions of the
/// identity (PVMs), and the trace-form probability rule on them.
///
/// Gleason's theorem singles out Tr(rho P) as the only noncontextual
/// assignment for dimension > 2. Two-dimensional event spaces are accepted
/// here as well; nothing in this module depends on the theorem's premise.

#ifndef QKIN_EVENT_SPACE_H
#define QKIN_EVENT_SPACE_H

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkin/linalg.h"
#include "qkin/random.h"

namespace qkin {

/// Orthogonal projector (Hermitian, idempotent).
class Projector {
   public:
    /// Validates idempotence, hermiticity and integral trace; throws InvariantError.
    explicit Projector(ComplexMatrix matrix);

    std::size_t dim() const { return matrix_.rows(); }
    std::size_t rank() const { return rank_; }
    const ComplexMatrix &matrix() const { return matrix_; }

    /// I - P.
    Projector complement() const;

   private:
    ComplexMatrix matrix_;
    std::size_t rank_ = 0;
};

/// Projector onto the span of the columns of `columns`. Throws
/// InvariantError when the smallest Gram eigenvalue is not above
/// tolerances().gram_min_eigenvalue (linearly dependent family).
Projector projector_onto_columns(const ComplexMatrix &columns);
Projector projector_onto_span(std::span<const StateVector> vectors);

/// One measurement context: mutually orthogonal projectors summing to I.
class PVM {
   public:
    /// Throws InvariantError on non-orthogonal or incomplete families and
    /// DimensionError on mismatched sizes. Empty outcome labels default to
    /// "0", "1", ...
    PVM(std::string label, std::vector<Projector> elements, std::vector<std::string> outcome_labels = {});

    /// Rank-1 PVM from the columns of a unitary.
    static PVM from_basis(std::string label, const ComplexMatrix &unitary,
                          std::vector<std::string> outcome_labels = {});
    static PVM from_states(std::string label, std::span<const StateVector> orthonormal_basis,
                           std::vector<std::string> outcome_labels = {});
    static PVM computational(std::size_t dim);

    const std::string &label() const { return label_; }
    std::size_t dim() const { return elements_.front().dim(); }
    std::size_t size() const { return elements_.size(); }
    const std::vector<Projector> &elements() const { return elements_; }
    const std::vector<std::string> &outcome_labels() const { return outcome_labels_; }

    /// Index of the element equal to `p` within tolerances().pvm_membership.
    std::optional<std::size_t> find(const Projector &p) const;

   private:
    std::string label_;
    std::vector<Projector> elements_;
    std::vector<std::string> outcome_labels_;
};

/// |<e|f>|^2.
double transition_probability(const StateVector &e, const StateVector &f);

/// Tr(rho P), clamped to [0, 1]. A raw value outside the band
/// [-probability_band, 1 + probability_band] is an upstream invariant
/// violation and throws InvariantError.
double born_probability(const DensityOperator &rho, const Projector &p);

std::vector<double> born_distribution(const DensityOperator &rho, const PVM &pvm);

struct AdditivityReport {
    std::vector<double> probabilities;
    double sum = 0;
    bool pass = false;
};

AdditivityReport pvm_additivity_check(const DensityOperator &rho, const PVM &pvm);

struct NoncontextualityReport {
    std::vector<std::string> context_labels;
    std::vector<double> probabilities;
    double max_difference = 0;
    bool pass = false;
};

/// Probability of `shared` computed separately inside every context that
/// contains it. Throws InvariantError if some context does not contain it.
NoncontextualityReport noncontextuality_check(const DensityOperator &rho, const Projector &shared,
                                              std::span<const PVM> contexts);

/// P (x) I_{dim_b} and I_{dim_a} (x) P.
Projector embed_left(const Projector &p, std::size_t dim_b);
Projector embed_right(std::size_t dim_a, const Projector &p);
PVM embed_left(const PVM &pvm, std::size_t dim_b);
PVM embed_right(std::size_t dim_a, const PVM &pvm);

/// Random PVM: a Haar-random basis grouped into `parts` nonempty blocks of
/// random sizes (parts == 0 picks a random block count).
PVM random_pvm(std::size_t dim, Rng &rng, std::size_t parts = 0);

/// Two PVMs sharing `shared`, built by completing it with two independent
/// random orthonormal bases of its complement. Each context holds its own
/// copy of `shared`, resummed from a random basis of its range.
std::pair<PVM, PVM> random_contexts_sharing(const Projector &shared, Rng &rng);

}  // namespace qkin

#endif
