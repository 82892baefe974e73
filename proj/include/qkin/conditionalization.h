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

/// Lüders conditionalization, remote steering and no-signaling checks on
/// bipartite pure states, plus the 3 (x) 2 trine steering example.

#ifndef QKIN_CONDITIONALIZATION_H
#define QKIN_CONDITIONALIZATION_H

#include <array>
#include <string>
#include <vector>

#include "qkin/event_space.h"
#include "qkin/linalg.h"

namespace qkin {

struct LudersResult {
    DensityOperator posterior;
    double probability;
};

/// rho -> P rho P / Tr(rho P). Throws UndefinedOperationError when
/// Tr(rho P) <= tolerances().min_event_probability.
LudersResult luders_update(const DensityOperator &rho, const Projector &p);

/// Non-selective update sum_i P_i rho P_i (the post-measurement ensemble).
DensityOperator dephase(const DensityOperator &rho, const PVM &pvm);

/// Projector onto eigenvectors of rho with eigenvalue above `cutoff`.
Projector support_projector(const DensityOperator &rho, double cutoff);
Projector support_projector(const DensityOperator &rho);

/// Subsystem dimensions of a bipartite space.
struct Bipartition {
    std::size_t dim_a;
    std::size_t dim_b;
    std::size_t total() const { return dim_a * dim_b; }
};

struct SteeredEnsemble {
    std::vector<std::string> outcome_labels;
    std::vector<double> weights;
    /// Remote (B) state conditional on each outcome. Zero-weight outcomes
    /// carry the prior remote state.
    std::vector<DensityOperator> states;

    /// sum_i w_i rho_i.
    ComplexMatrix mixture() const;
};

/// Conditions psi on each outcome of a PVM on factor A and returns the
/// induced ensemble on B. The PVM may be given on A alone or embedded as
/// P (x) I on AB; an embedded element that does not factor that way throws
/// InvariantError.
SteeredEnsemble remote_steering(const StateVector &psi, Bipartition dims, const PVM &pvm_on_a);

/// Joint outcome table of one A-context with the B-PVM:
/// joint[a][b] = p(ab|AB).
struct JointDistribution {
    std::string context_label;
    std::vector<std::vector<double>> joint;
};

struct NoSignalingReport {
    /// p(b|B) computed from the reduced state of B.
    std::vector<double> reference;
    std::vector<std::string> context_labels;
    /// sum_a p(ab|AB) per A-context.
    std::vector<std::vector<double>> marginals;
    double max_deviation = 0;
    bool pass = false;
};

std::vector<JointDistribution> joint_distributions(const StateVector &psi, Bipartition dims,
                                                   std::span<const PVM> pvms_on_a, const PVM &pvm_on_b);

/// Compares the B-marginal of every joint table against `reference`.
/// Throws DimensionError on ragged or mismatched tables.
NoSignalingReport no_signaling_from_joint(std::span<const JointDistribution> joints,
                                          std::span<const double> reference);

NoSignalingReport no_signaling_check(const StateVector &psi, Bipartition dims, std::span<const PVM> pvms_on_a,
                                     const PVM &pvm_on_b);

/// The 3 (x) 2 example: one entangled state written two ways,
///   (|a1>|b1> + |a2>|c> + |a3>|d>)/sqrt3 = (|a'1>|b2> + |a'2>|e> + |a'3>|f>)/sqrt3,
/// with {b1,c,d} and {b2,e,f} trines in C^2 and {a_i}, {a'_i} orthonormal
/// bases of C^3.
struct SteeringExample {
    StateVector psi_ab;
    std::array<StateVector, 3> basis_a;
    std::array<StateVector, 3> basis_a_prime;
    std::array<StateVector, 3> trine_1;
    std::array<StateVector, 3> trine_2;
    StateVector g;
    StateVector h;

    static constexpr Bipartition dims{3, 2};

    /// Amplitudes of sum_i |basis_i>|trine_i> / sqrt3.
    static std::vector<Complex> decomposition(const std::array<StateVector, 3> &basis,
                                              const std::array<StateVector, 3> &trine);

    PVM pvm_a() const;
    PVM pvm_a_prime() const;
    /// {|b1><b1|, |b2><b2|}.
    PVM pvm_b() const;
};

/// Invariant deviations of a steering example, each a max-entry distance.
struct SteeringInvariants {
    double first_decomposition = 0;   // |psi - decomposition(a, trine_1)|
    double second_decomposition = 0;  // |psi - decomposition(a', trine_2)|
    double trine_1_overlap = 0;       // max | |<x|y>|^2 - 1/4 |
    double trine_2_overlap = 0;
    double trine_1_mixture = 0;  // |mixture - I/2|
    double trine_2_mixture = 0;
    double basis_a_orthonormality = 0;
    double basis_a_prime_orthonormality = 0;

    double worst() const;
};

SteeringInvariants steering_invariants(const SteeringExample &example);

/// Trines at angles {0, 2pi/3, 4pi/3} and {pi/2, pi/2 + 2pi/3, pi/2 + 4pi/3}
/// in the real {b1, b2} plane; {a_i} the computational basis. Throws
/// InvariantError if any invariant fails by more than 1e-10.
SteeringExample build_steering_example();

}  // namespace qkin

#endif
