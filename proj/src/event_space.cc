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

#include "qkin/event_space.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qkin/config.h"
#include "qkin/errors.h"

namespace qkin {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::to_string(i));
    }
    return out;
}

// Real part of Tr(a b) without forming the product.
double trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    Complex s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * b(j, i);
        }
    }
    return s.real();
}

// Orthonormal basis (as columns) of the eigenvalue-1 eigenspace of a projector.
ComplexMatrix range_basis(const Projector &p) {
    auto eig = hermitian_eig(p.matrix());
    const std::size_t n = p.dim();
    ComplexMatrix basis(n, p.rank());
    for (std::size_t k = 0; k < p.rank(); ++k) {
        std::size_t col = n - p.rank() + k;
        for (std::size_t r = 0; r < n; ++r) {
            basis(r, k) = eig.vectors(r, col);
        }
    }
    return basis;
}

}  // namespace

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    const auto &tol = tolerances();
    if (!matrix_.is_square() || matrix_.rows() == 0) {
        throw DimensionError("Projector: matrix must be square and nonempty");
    }
    if (hermiticity_error(matrix_) > tol.hermitian) {
        throw InvariantError("Projector: not Hermitian");
    }
    double idem = max_abs_diff(matrix_ * matrix_, matrix_);
    if (idem > tol.idempotent) {
        throw InvariantError("Projector: not idempotent (|P^2 - P| = " + std::to_string(idem) + ")");
    }
    double tr = matrix_.trace().real();
    double rounded = std::round(tr);
    if (std::abs(tr - rounded) > tol.projector_rank || rounded < 0) {
        throw InvariantError("Projector: trace " + std::to_string(tr) + " is not an integer");
    }
    rank_ = static_cast<std::size_t>(rounded);
}

Projector Projector::complement() const {
    return Projector(hermitian_part(ComplexMatrix::identity(dim()) - matrix_));
}

Projector projector_onto_columns(const ComplexMatrix &columns) {
    if (columns.cols() == 0 || columns.rows() == 0) {
        throw DimensionError("projector_onto_columns: empty family");
    }
    auto gram = hermitian_eig(hermitian_part(columns.adjoint() * columns));
    if (gram.values.front() <= tolerances().gram_min_eigenvalue) {
        throw InvariantError("projector_onto_columns: vectors are linearly dependent (smallest Gram eigenvalue " +
                             std::to_string(gram.values.front()) + ")");
    }
    // Q = V W diag(lambda^-1/2) is an orthonormal basis of the span.
    ComplexMatrix q = columns * gram.vectors;
    for (std::size_t c = 0; c < q.cols(); ++c) {
        double s = 1.0 / std::sqrt(gram.values[c]);
        for (std::size_t r = 0; r < q.rows(); ++r) {
            q(r, c) *= s;
        }
    }
    return Projector(hermitian_part(q * q.adjoint()));
}

Projector projector_onto_span(std::span<const StateVector> vectors) {
    if (vectors.empty()) {
        throw DimensionError("projector_onto_span: empty family");
    }
    const std::size_t n = vectors.front().dim();
    ComplexMatrix columns(n, vectors.size());
    for (std::size_t c = 0; c < vectors.size(); ++c) {
        if (vectors[c].dim() != n) {
            throw DimensionError("projector_onto_span: mixed dimensions");
        }
        for (std::size_t r = 0; r < n; ++r) {
            columns(r, c) = vectors[c][r];
        }
    }
    return projector_onto_columns(columns);
}

// ---------------------------------------------------------------------------
// PVM

PVM::PVM(std::string label, std::vector<Projector> elements, std::vector<std::string> outcome_labels)
    : label_(std::move(label)), elements_(std::move(elements)), outcome_labels_(std::move(outcome_labels)) {
    const auto &tol = tolerances();
    if (elements_.empty()) {
        throw InvariantError("PVM '" + label_ + "': no elements");
    }
    if (outcome_labels_.empty()) {
        outcome_labels_ = default_labels(elements_.size());
    }
    if (outcome_labels_.size() != elements_.size()) {
        throw DimensionError("PVM '" + label_ + "': " + std::to_string(outcome_labels_.size()) +
                             " labels for " + std::to_string(elements_.size()) + " elements");
    }
    const std::size_t n = elements_.front().dim();
    ComplexMatrix sum(n, n);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].dim() != n) {
            throw DimensionError("PVM '" + label_ + "': elements of different dimensions");
        }
        sum += elements_[i].matrix();
        for (std::size_t j = i + 1; j < elements_.size(); ++j) {
            double overlap = (elements_[i].matrix() * elements_[j].matrix()).max_abs();
            if (overlap > tol.pvm_orthogonal) {
                throw InvariantError("PVM '" + label_ + "': elements " + std::to_string(i) + " and " +
                                     std::to_string(j) + " are not orthogonal");
            }
        }
    }
    double completeness = max_abs_diff(sum, ComplexMatrix::identity(n));
    if (completeness > tol.pvm_complete) {
        throw InvariantError("PVM '" + label_ + "': elements do not sum to the identity (error " +
                             std::to_string(completeness) + ")");
    }
}

PVM PVM::from_basis(std::string label, const ComplexMatrix &unitary, std::vector<std::string> outcome_labels) {
    if (!unitary.is_square()) {
        throw DimensionError("PVM::from_basis: basis matrix must be square");
    }
    std::vector<Projector> elements;
    for (std::size_t c = 0; c < unitary.cols(); ++c) {
        auto v = unitary.column_vector(c);
        ComplexMatrix p(v.size(), v.size());
        for (std::size_t r = 0; r < v.size(); ++r) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                p(r, k) = v[r] * std::conj(v[k]);
            }
        }
        elements.emplace_back(std::move(p));
    }
    return PVM(std::move(label), std::move(elements), std::move(outcome_labels));
}

PVM PVM::from_states(std::string label, std::span<const StateVector> orthonormal_basis,
                     std::vector<std::string> outcome_labels) {
    std::vector<Projector> elements;
    for (const auto &v : orthonormal_basis) {
        elements.emplace_back(v.outer());
    }
    return PVM(std::move(label), std::move(elements), std::move(outcome_labels));
}

PVM PVM::computational(std::size_t dim) {
    return from_basis("computational", ComplexMatrix::identity(dim));
}

std::optional<std::size_t> PVM::find(const Projector &p) const {
    if (p.dim() != dim()) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (max_abs_diff(elements_[i].matrix(), p.matrix()) < tolerances().pvm_membership) {
            return i;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Probabilities

double transition_probability(const StateVector &e, const StateVector &f) {
    return std::min(1.0, std::norm(inner(e, f)));
}

double born_probability(const DensityOperator &rho, const Projector &p) {
    if (rho.dim() != p.dim()) {
        throw DimensionError("born_probability: state dimension " + std::to_string(rho.dim()) +
                             ", projector dimension " + std::to_string(p.dim()));
    }
    double raw = trace_of_product(rho.matrix(), p.matrix());
    double band = tolerances().probability_band;
    if (raw < -band || raw > 1 + band) {
        throw InvariantError("born_probability: Tr(rho P) = " + std::to_string(raw) + " outside [0, 1]");
    }
    return std::clamp(raw, 0.0, 1.0);
}

std::vector<double> born_distribution(const DensityOperator &rho, const PVM &pvm) {
    std::vector<double> out;
    out.reserve(pvm.size());
    for (const auto &p : pvm.elements()) {
        out.push_back(born_probability(rho, p));
    }
    return out;
}

AdditivityReport pvm_additivity_check(const DensityOperator &rho, const PVM &pvm) {
    AdditivityReport r;
    r.probabilities = born_distribution(rho, pvm);
    r.sum = std::accumulate(r.probabilities.begin(), r.probabilities.end(), 0.0);
    r.pass = std::abs(r.sum - 1.0) < tolerances().additivity;
    return r;
}

NoncontextualityReport noncontextuality_check(const DensityOperator &rho, const Projector &shared,
                                              std::span<const PVM> contexts) {
    NoncontextualityReport r;
    for (const auto &ctx : contexts) {
        auto index = ctx.find(shared);
        if (!index) {
            throw InvariantError("noncontextuality_check: shared event is not an element of context '" +
                                 ctx.label() + "'");
        }
        r.context_labels.push_back(ctx.label());
        // Computed through the context's own copy of the element.
        r.probabilities.push_back(born_probability(rho, ctx.elements()[*index]));
    }
    for (std::size_t i = 0; i < r.probabilities.size(); ++i) {
        for (std::size_t j = i + 1; j < r.probabilities.size(); ++j) {
            r.max_difference = std::max(r.max_difference, std::abs(r.probabilities[i] - r.probabilities[j]));
        }
    }
    r.pass = r.max_difference < tolerances().noncontextuality;
    return r;
}

// ---------------------------------------------------------------------------
// Embedding into a bipartite space

Projector embed_left(const Projector &p, std::size_t dim_b) {
    return Projector(tensor_product(p.matrix(), ComplexMatrix::identity(dim_b)));
}

Projector embed_right(std::size_t dim_a, const Projector &p) {
    return Projector(tensor_product(ComplexMatrix::identity(dim_a), p.matrix()));
}

PVM embed_left(const PVM &pvm, std::size_t dim_b) {
    std::vector<Projector> elements;
    for (const auto &p : pvm.elements()) {
        elements.push_back(embed_left(p, dim_b));
    }
    return PVM(pvm.label(), std::move(elements), pvm.outcome_labels());
}

PVM embed_right(std::size_t dim_a, const PVM &pvm) {
    std::vector<Projector> elements;
    for (const auto &p : pvm.elements()) {
        elements.push_back(embed_right(dim_a, p));
    }
    return PVM(pvm.label(), std::move(elements), pvm.outcome_labels());
}

// ---------------------------------------------------------------------------
// Random contexts

PVM random_pvm(std::size_t dim, Rng &rng, std::size_t parts) {
    if (dim == 0) {
        throw DimensionError("random_pvm: zero dimension");
    }
    if (parts == 0) {
        parts = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(dim));
        parts = std::min(parts, dim);
    }
    if (parts > dim) {
        throw DimensionError("random_pvm: more parts than dimensions");
    }
    ComplexMatrix u = random_unitary(dim, rng);
    // Random composition of dim into `parts` positive sizes: choose
    // parts - 1 distinct cut points in 1..dim-1.
    std::vector<std::size_t> cuts(dim - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    for (std::size_t i = 0; i + 1 < parts; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(cuts.size() - i));
        std::swap(cuts[i], cuts[j]);
    }
    cuts.resize(parts - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(dim);

    std::vector<Projector> elements;
    std::size_t begin = 0;
    for (std::size_t end : cuts) {
        ComplexMatrix p(dim, dim);
        for (std::size_t k = begin; k < end; ++k) {
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    p(r, c) += u(r, k) * std::conj(u(c, k));
                }
            }
        }
        elements.emplace_back(hermitian_part(p));
        begin = end;
    }
    return PVM("random", std::move(elements));
}

std::pair<PVM, PVM> random_contexts_sharing(const Projector &shared, Rng &rng) {
    const std::size_t n = shared.dim();
    Projector rest = shared.complement();
    // Sum of outer products over a randomly rotated basis of `p`'s range.
    auto resolve = [&](const Projector &p) {
        ComplexMatrix basis = range_basis(p) * random_unitary(p.rank(), rng);
        std::vector<ComplexMatrix> parts;
        ComplexMatrix total(n, n);
        for (std::size_t k = 0; k < basis.cols(); ++k) {
            ComplexMatrix q(n, n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    q(r, c) = basis(r, k) * std::conj(basis(c, k));
                }
            }
            total += q;
            parts.push_back(std::move(q));
        }
        return std::pair{std::move(total), std::move(parts)};
    };
    auto make = [&](const char *label) {
        // Each context carries its own rebuilt copy of the shared event, so
        // agreement across contexts is a numerical statement, not an identity.
        std::vector<Projector> elements;
        if (shared.rank() > 0) {
            elements.emplace_back(resolve(shared).first);
        }
        if (rest.rank() > 0) {
            for (auto &q : resolve(rest).second) {
                elements.emplace_back(std::move(q));
            }
        }
        return PVM(label, std::move(elements));
    };
    PVM first = make("context_1");
    PVM second = make("context_2");
    return {std::move(first), std::move(second)};
}

}  // namespace qkin
