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

#include "qkin/conditionalization.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qkin/config.h"
#include "qkin/errors.h"

namespace qkin {

namespace {

DensityOperator normalized_density(ComplexMatrix m) {
    m = hermitian_part(m);
    m *= Complex(1.0 / m.trace().real());
    return DensityOperator(std::move(m));
}

// Local A-projectors of a PVM given either on A or embedded as P (x) I_B.
std::vector<ComplexMatrix> local_projectors_on_a(const PVM &pvm, Bipartition dims) {
    std::vector<ComplexMatrix> out;
    if (pvm.dim() == dims.dim_a) {
        for (const auto &p : pvm.elements()) {
            out.push_back(p.matrix());
        }
        return out;
    }
    if (pvm.dim() != dims.total()) {
        throw DimensionError("PVM '" + pvm.label() + "' of dimension " + std::to_string(pvm.dim()) +
                             " acts on neither A (" + std::to_string(dims.dim_a) + ") nor AB (" +
                             std::to_string(dims.total()) + ")");
    }
    const ComplexMatrix id_b = ComplexMatrix::identity(dims.dim_b);
    for (const auto &p : pvm.elements()) {
        ComplexMatrix local(dims.dim_a, dims.dim_a);
        for (std::size_t a = 0; a < dims.dim_a; ++a) {
            for (std::size_t a2 = 0; a2 < dims.dim_a; ++a2) {
                Complex s = 0;
                for (std::size_t b = 0; b < dims.dim_b; ++b) {
                    s += p.matrix()(a * dims.dim_b + b, a2 * dims.dim_b + b);
                }
                local(a, a2) = s / static_cast<double>(dims.dim_b);
            }
        }
        if (max_abs_diff(tensor_product(local, id_b), p.matrix()) > tolerances().pvm_membership) {
            throw InvariantError("PVM '" + pvm.label() + "' is not of the form P (x) I on factor A");
        }
        out.push_back(local);
    }
    return out;
}

// (P (x) I) psi as a flat amplitude vector.
std::vector<Complex> apply_on_a(const ComplexMatrix &p, const StateVector &psi, Bipartition dims) {
    std::vector<Complex> phi(dims.total(), 0.0);
    for (std::size_t a = 0; a < dims.dim_a; ++a) {
        for (std::size_t a2 = 0; a2 < dims.dim_a; ++a2) {
            Complex pa = p(a, a2);
            if (pa == Complex(0.0)) {
                continue;
            }
            for (std::size_t b = 0; b < dims.dim_b; ++b) {
                phi[a * dims.dim_b + b] += pa * psi[a2 * dims.dim_b + b];
            }
        }
    }
    return phi;
}

// Tr_A |phi><phi| without normalization.
ComplexMatrix remote_block(std::span<const Complex> phi, Bipartition dims) {
    ComplexMatrix out(dims.dim_b, dims.dim_b);
    for (std::size_t b = 0; b < dims.dim_b; ++b) {
        for (std::size_t b2 = 0; b2 < dims.dim_b; ++b2) {
            Complex s = 0;
            for (std::size_t a = 0; a < dims.dim_a; ++a) {
                s += phi[a * dims.dim_b + b] * std::conj(phi[a * dims.dim_b + b2]);
            }
            out(b, b2) = s;
        }
    }
    return out;
}

double real_trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    Complex s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * b(j, i);
        }
    }
    return s.real();
}

void require_bipartite(const StateVector &psi, Bipartition dims) {
    if (dims.dim_a == 0 || dims.dim_b == 0 || psi.dim() != dims.total()) {
        throw DimensionError("bipartite state of dimension " + std::to_string(psi.dim()) + " does not match " +
                             std::to_string(dims.dim_a) + " x " + std::to_string(dims.dim_b));
    }
}

double orthonormality_error(const std::array<StateVector, 3> &basis) {
    double e = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            Complex expected = i == j ? 1.0 : 0.0;
            e = std::max(e, std::abs(inner(basis[i], basis[j]) - expected));
        }
    }
    return e;
}

double trine_overlap_error(const std::array<StateVector, 3> &t) {
    double e = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            e = std::max(e, std::abs(transition_probability(t[i], t[j]) - 0.25));
        }
    }
    return e;
}

double trine_mixture_error(const std::array<StateVector, 3> &t) {
    ComplexMatrix m(2, 2);
    for (const auto &v : t) {
        m += (1.0 / 3.0) * v.outer();
    }
    return max_abs_diff(m, 0.5 * ComplexMatrix::identity(2));
}

std::array<StateVector, 3> planar_trine(double offset) {
    auto at = [&](int k) {
        double angle = offset + 2.0 * std::numbers::pi * k / 3.0;
        return StateVector::normalized({std::cos(angle), std::sin(angle)});
    };
    return {at(0), at(1), at(2)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Lüders rule and support

LudersResult luders_update(const DensityOperator &rho, const Projector &p) {
    double prob = born_probability(rho, p);
    if (prob <= tolerances().min_event_probability) {
        throw UndefinedOperationError("luders_update: conditioning event has probability " + std::to_string(prob));
    }
    ComplexMatrix m = p.matrix() * rho.matrix() * p.matrix();
    return {normalized_density(std::move(m)), prob};
}

DensityOperator dephase(const DensityOperator &rho, const PVM &pvm) {
    if (rho.dim() != pvm.dim()) {
        throw DimensionError("dephase: state dimension " + std::to_string(rho.dim()) + ", PVM dimension " +
                             std::to_string(pvm.dim()));
    }
    ComplexMatrix sum(rho.dim(), rho.dim());
    for (const auto &p : pvm.elements()) {
        sum += p.matrix() * rho.matrix() * p.matrix();
    }
    return normalized_density(std::move(sum));
}

Projector support_projector(const DensityOperator &rho, double cutoff) {
    auto eig = hermitian_eig(rho.matrix());
    const std::size_t n = rho.dim();
    ComplexMatrix p(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.values[k] <= cutoff) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                p(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k));
            }
        }
    }
    return Projector(hermitian_part(p));
}

Projector support_projector(const DensityOperator &rho) {
    return support_projector(rho, tolerances().support_cutoff);
}

// ---------------------------------------------------------------------------
// Remote steering

ComplexMatrix SteeredEnsemble::mixture() const {
    ComplexMatrix m(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
        m += weights[i] * states[i].matrix();
    }
    return m;
}

SteeredEnsemble remote_steering(const StateVector &psi, Bipartition dims, const PVM &pvm_on_a) {
    require_bipartite(psi, dims);
    auto locals = local_projectors_on_a(pvm_on_a, dims);
    const std::size_t keep_b[] = {1};
    const std::size_t sizes[] = {dims.dim_a, dims.dim_b};
    DensityOperator prior = partial_trace(psi, sizes, keep_b);

    SteeredEnsemble out;
    out.outcome_labels = pvm_on_a.outcome_labels();
    for (const auto &p : locals) {
        auto phi = apply_on_a(p, psi, dims);
        ComplexMatrix block = remote_block(phi, dims);
        double weight = std::max(0.0, block.trace().real());
        out.weights.push_back(weight);
        if (weight > tolerances().min_event_probability) {
            out.states.push_back(normalized_density(std::move(block)));
        } else {
            out.states.push_back(prior);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// No signaling

std::vector<JointDistribution> joint_distributions(const StateVector &psi, Bipartition dims,
                                                   std::span<const PVM> pvms_on_a, const PVM &pvm_on_b) {
    require_bipartite(psi, dims);
    if (pvm_on_b.dim() != dims.dim_b) {
        throw DimensionError("B-PVM '" + pvm_on_b.label() + "' has dimension " + std::to_string(pvm_on_b.dim()) +
                             ", expected " + std::to_string(dims.dim_b));
    }
    std::vector<JointDistribution> out;
    for (const auto &pvm : pvms_on_a) {
        JointDistribution jd{pvm.label(), {}};
        for (const auto &p : local_projectors_on_a(pvm, dims)) {
            ComplexMatrix block = remote_block(apply_on_a(p, psi, dims), dims);
            std::vector<double> row;
            for (const auto &q : pvm_on_b.elements()) {
                row.push_back(std::max(0.0, real_trace_product(block, q.matrix())));
            }
            jd.joint.push_back(std::move(row));
        }
        out.push_back(std::move(jd));
    }
    return out;
}

NoSignalingReport no_signaling_from_joint(std::span<const JointDistribution> joints,
                                          std::span<const double> reference) {
    NoSignalingReport r;
    r.reference.assign(reference.begin(), reference.end());
    for (const auto &jd : joints) {
        std::vector<double> marginal(reference.size(), 0.0);
        for (const auto &row : jd.joint) {
            if (row.size() != reference.size()) {
                throw DimensionError("no_signaling: joint table '" + jd.context_label + "' has " +
                                     std::to_string(row.size()) + " B outcomes, expected " +
                                     std::to_string(reference.size()));
            }
            for (std::size_t b = 0; b < row.size(); ++b) {
                marginal[b] += row[b];
            }
        }
        for (std::size_t b = 0; b < marginal.size(); ++b) {
            r.max_deviation = std::max(r.max_deviation, std::abs(marginal[b] - reference[b]));
        }
        r.context_labels.push_back(jd.context_label);
        r.marginals.push_back(std::move(marginal));
    }
    r.pass = r.max_deviation < tolerances().no_signaling;
    return r;
}

NoSignalingReport no_signaling_check(const StateVector &psi, Bipartition dims, std::span<const PVM> pvms_on_a,
                                     const PVM &pvm_on_b) {
    auto joints = joint_distributions(psi, dims, pvms_on_a, pvm_on_b);
    const std::size_t keep_b[] = {1};
    const std::size_t sizes[] = {dims.dim_a, dims.dim_b};
    auto reference = born_distribution(partial_trace(psi, sizes, keep_b), pvm_on_b);
    return no_signaling_from_joint(joints, reference);
}

// ---------------------------------------------------------------------------
// Steering example

std::vector<Complex> SteeringExample::decomposition(const std::array<StateVector, 3> &basis,
                                                    const std::array<StateVector, 3> &trine) {
    std::vector<Complex> psi(6, 0.0);
    const double w = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                psi[a * 2 + b] += w * basis[i][a] * trine[i][b];
            }
        }
    }
    return psi;
}

PVM SteeringExample::pvm_a() const { return PVM::from_states("A", basis_a, {"a1", "a2", "a3"}); }

PVM SteeringExample::pvm_a_prime() const {
    return PVM::from_states("A'", basis_a_prime, {"a'1", "a'2", "a'3"});
}

PVM SteeringExample::pvm_b() const {
    const StateVector b[] = {trine_1[0], trine_2[0]};
    return PVM::from_states("B", b, {"b1", "b2"});
}

double SteeringInvariants::worst() const {
    return std::max({first_decomposition, second_decomposition, trine_1_overlap, trine_2_overlap, trine_1_mixture,
                     trine_2_mixture, basis_a_orthonormality, basis_a_prime_orthonormality});
}

SteeringInvariants steering_invariants(const SteeringExample &ex) {
    auto distance = [&](const std::vector<Complex> &v) {
        double e = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            e = std::max(e, std::abs(v[i] - ex.psi_ab[i]));
        }
        return e;
    };
    SteeringInvariants inv;
    inv.first_decomposition = distance(SteeringExample::decomposition(ex.basis_a, ex.trine_1));
    inv.second_decomposition = distance(SteeringExample::decomposition(ex.basis_a_prime, ex.trine_2));
    inv.trine_1_overlap = trine_overlap_error(ex.trine_1);
    inv.trine_2_overlap = trine_overlap_error(ex.trine_2);
    inv.trine_1_mixture = trine_mixture_error(ex.trine_1);
    inv.trine_2_mixture = trine_mixture_error(ex.trine_2);
    inv.basis_a_orthonormality = orthonormality_error(ex.basis_a);
    inv.basis_a_prime_orthonormality = orthonormality_error(ex.basis_a_prime);
    return inv;
}

SteeringExample build_steering_example() {
    const double pi = std::numbers::pi;
    std::array<StateVector, 3> basis_a{StateVector::basis(3, 0), StateVector::basis(3, 1), StateVector::basis(3, 2)};
    auto trine_1 = planar_trine(0.0);
    auto trine_2 = planar_trine(pi / 2);
    StateVector psi(SteeringExample::decomposition(basis_a, trine_1));

    const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    StateVector g({2 / s6, -1 / s6, -1 / s6});
    StateVector h({0.0, 1 / s2, -1 / s2});

    // psi = (|g>|b1> + |h>|b2>)/sqrt2 lives in span{g, h} (x) C^2. The
    // relative states (I (x) <t_i|) psi of the second trine span only that
    // plane with norm^2 1/2 each; adding an equal component along the unit
    // normal k of the plane makes them orthonormal, and leaves psi unchanged
    // because the trine vectors sum to zero.
    const std::vector<Complex> k{1 / s3, 1 / s3, 1 / s3};
    std::array<std::vector<Complex>, 3> primed;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<Complex> v(3, 0.0);
        for (std::size_t a = 0; a < 3; ++a) {
            Complex rel = 0;
            for (std::size_t b = 0; b < 2; ++b) {
                rel += std::conj(trine_2[i][b]) * psi[a * 2 + b];
            }
            v[a] = (2 / s3) * rel + k[a] / s3;
        }
        primed[i] = std::move(v);
    }
    std::array<StateVector, 3> basis_a_prime{StateVector::normalized(primed[0]), StateVector::normalized(primed[1]),
                                             StateVector::normalized(primed[2])};

    SteeringExample ex{psi, basis_a, basis_a_prime, trine_1, trine_2, g, h};
    double worst = steering_invariants(ex).worst();
    if (worst > 1e-10) {
        throw InvariantError("build_steering_example: invariant deviation " + std::to_string(worst));
    }
    return ex;
}

}  // namespace qkin
