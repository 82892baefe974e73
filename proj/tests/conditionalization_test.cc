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

#include "gtest/gtest.h"
#include "qkin/errors.h"
#include "qkin/random.h"
#include "test_util.h"

using namespace qkin;
using namespace qkin_test;

namespace {

const std::size_t kDims[] = {3, 2};
const std::size_t kKeepA[] = {0};
const std::size_t kKeepB[] = {1};

Projector plane_of(const SteeringExample &ex) {
    const StateVector v[] = {ex.g, ex.h};
    return projector_onto_span(v);
}

}  // namespace

TEST(conditionalization, luders_basic) {
    auto mixed = DensityOperator::maximally_mixed(2);
    Projector z0(StateVector::basis(2, 0).outer());
    auto r = luders_update(mixed, z0);
    ASSERT_NEAR(r.probability, 0.5, 1e-15);
    ASSERT_LT(max_abs_diff(r.posterior.matrix(), z0.matrix()), 1e-15);

    // Conditioning on an event of probability one changes nothing.
    auto rho = DensityOperator::pure(plus());
    auto same = luders_update(rho, Projector(plus().outer()));
    ASSERT_NEAR(same.probability, 1.0, 1e-15);
    ASSERT_LT(max_abs_diff(same.posterior.matrix(), rho.matrix()), 1e-15);
}

TEST(conditionalization, luders_rejects_null_event) {
    auto rho = DensityOperator::pure(StateVector::basis(2, 0));
    ASSERT_THROW(luders_update(rho, Projector(StateVector::basis(2, 1).outer())), UndefinedOperationError);
    ASSERT_THROW(luders_update(rho, Projector(ComplexMatrix::identity(3))), DimensionError);
}

TEST(conditionalization, luders_idempotent_and_supported) {
    Rng rng(derive_seed(60, 0));
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t d = 2 + trial % 4;
        auto rho = random_density(d, rng);
        auto pvm = random_pvm(d, rng);
        for (const auto &p : pvm.elements()) {
            auto once = luders_update(rho, p);
            auto twice = luders_update(once.posterior, p);
            ASSERT_NEAR(twice.probability, 1.0, 1e-10);
            ASSERT_LT(max_abs_diff(once.posterior.matrix(), twice.posterior.matrix()), 1e-10);
            ASSERT_NEAR(born_probability(once.posterior, p), 1.0, 1e-10);
        }
    }
}

TEST(conditionalization, dephase_mixes_outcomes) {
    auto rho = DensityOperator::pure(plus());
    auto out = dephase(rho, PVM::computational(2));
    ASSERT_LT(max_abs_diff(out.matrix(), 0.5 * ComplexMatrix::identity(2)), 1e-15);
    ASSERT_NEAR(trace_distance(rho, out), 0.5, 1e-14);
}

TEST(conditionalization, support_projector) {
    auto rho = DensityOperator(ComplexMatrix(3, 3, {0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0}));
    auto s = support_projector(rho);
    ASSERT_EQ(s.rank(), 2u);
    ASSERT_EQ(support_projector(DensityOperator::maximally_mixed(4)).rank(), 4u);
}

TEST(conditionalization, steering_example_invariants) {
    auto ex = build_steering_example();
    auto inv = steering_invariants(ex);
    ASSERT_LT(inv.worst(), 1e-12);
    ASSERT_LT(inv.first_decomposition, 1e-12);
    ASSERT_LT(inv.second_decomposition, 1e-12);
    // g = (2|a1> - |a2> - |a3>)/sqrt6 and h = (|a2> - |a3>)/sqrt2.
    ASSERT_NEAR(ex.g[0].real(), 2 / std::sqrt(6.0), 1e-15);
    ASSERT_NEAR(ex.h[1].real(), kSqrtHalf, 1e-15);
    ASSERT_NEAR(ex.h[0].real(), 0.0, 1e-15);
}

TEST(conditionalization, steering_reduced_states) {
    auto ex = build_steering_example();
    auto rho_b = partial_trace(ex.psi_ab, kDims, kKeepB);
    ASSERT_LT(max_abs_diff(rho_b.matrix(), 0.5 * ComplexMatrix::identity(2)), 1e-12);

    auto rho_a = partial_trace(ex.psi_ab, kDims, kKeepA);
    ASSERT_LT(max_abs_diff(rho_a.matrix(), 0.5 * plane_of(ex).matrix()), 1e-12);
    auto e = hermitian_eig(rho_a.matrix());
    ASSERT_NEAR(e.values[0], 0.0, 1e-12);
    ASSERT_NEAR(e.values[1], 0.5, 1e-12);
    ASSERT_NEAR(e.values[2], 0.5, 1e-12);
    ASSERT_EQ(support_projector(rho_a).rank(), 2u);
}

TEST(conditionalization, steering_schmidt_plane) {
    auto ex = build_steering_example();
    auto s = schmidt_decompose(ex.psi_ab, 3, 2);
    ASSERT_EQ(s.coefficients.size(), 2u);
    ASSERT_NEAR(s.coefficients[0], kSqrtHalf, 1e-10);
    ASSERT_NEAR(s.coefficients[1], kSqrtHalf, 1e-10);
    // Left vectors span the same plane as g and h.
    auto span = projector_onto_span(s.left_vectors);
    ASSERT_LT(max_abs_diff(span.matrix(), plane_of(ex).matrix()), 1e-10);
}

TEST(conditionalization, plane_escape_after_conditioning) {
    auto ex = build_steering_example();
    auto rho_a = partial_trace(ex.psi_ab, kDims, kKeepA);
    Projector plane = plane_of(ex);
    ASSERT_NEAR(born_probability(rho_a, plane), 1.0, 1e-12);
    auto r = luders_update(rho_a, Projector(ex.basis_a[0].outer()));
    ASSERT_NEAR(r.probability, 1.0 / 3.0, 1e-12);
    ASSERT_LT(max_abs_diff(r.posterior.matrix(), ex.basis_a[0].outer()), 1e-12);
    ASSERT_NEAR(born_probability(r.posterior, plane), 2.0 / 3.0, 1e-12);
}

TEST(conditionalization, steering_selects_trine_members) {
    auto ex = build_steering_example();
    for (const auto &[pvm, trine] : {std::pair{ex.pvm_a(), ex.trine_1}, std::pair{ex.pvm_a_prime(), ex.trine_2}}) {
        auto ens = remote_steering(ex.psi_ab, SteeringExample::dims, pvm);
        ASSERT_EQ(ens.weights.size(), 3u);
        for (std::size_t i = 0; i < 3; ++i) {
            ASSERT_NEAR(ens.weights[i], 1.0 / 3.0, 1e-12);
            ASSERT_LT(max_abs_diff(ens.states[i].matrix(), trine[i].outer()), 1e-12);
        }
        ASSERT_LT(max_abs_diff(ens.mixture(), 0.5 * ComplexMatrix::identity(2)), 1e-12);
    }
}

TEST(conditionalization, steering_accepts_embedded_pvm) {
    auto ex = build_steering_example();
    auto local = remote_steering(ex.psi_ab, SteeringExample::dims, ex.pvm_a());
    auto embedded = remote_steering(ex.psi_ab, SteeringExample::dims, embed_left(ex.pvm_a(), 2));
    for (std::size_t i = 0; i < 3; ++i) {
        ASSERT_LT(max_abs_diff(local.states[i].matrix(), embedded.states[i].matrix()), 1e-12);
    }
    // An operator acting on B cannot be read as an A-measurement.
    ASSERT_THROW(remote_steering(ex.psi_ab, SteeringExample::dims, embed_right(3, PVM::computational(2))),
                 InvariantError);
    ASSERT_THROW(remote_steering(ex.psi_ab, Bipartition{2, 3}, PVM::computational(3)), DimensionError);
}

TEST(conditionalization, steering_zero_weight_outcome) {
    // |0>|0>: outcome 1 on A never occurs.
    auto psi = tensor_product(StateVector::basis(2, 0), StateVector::basis(2, 0));
    auto ens = remote_steering(psi, Bipartition{2, 2}, PVM::computational(2));
    ASSERT_NEAR(ens.weights[1], 0.0, 1e-15);
    ASSERT_LT(max_abs_diff(ens.mixture(), StateVector::basis(2, 0).outer()), 1e-15);
}

TEST(conditionalization, no_signaling_example) {
    auto ex = build_steering_example();
    const PVM contexts[] = {ex.pvm_a(), ex.pvm_a_prime()};
    auto r = no_signaling_check(ex.psi_ab, SteeringExample::dims, contexts, ex.pvm_b());
    ASSERT_TRUE(r.pass);
    for (const auto &m : r.marginals) {
        ASSERT_NEAR(m[0], 0.5, 1e-12);
        ASSERT_NEAR(m[1], 0.5, 1e-12);
    }
}

TEST(conditionalization, no_signaling_harness_detects_corruption) {
    auto ex = build_steering_example();
    const PVM contexts[] = {ex.pvm_a(), ex.pvm_a_prime()};
    auto joints = joint_distributions(ex.psi_ab, SteeringExample::dims, contexts, ex.pvm_b());
    const double reference[] = {0.5, 0.5};
    ASSERT_TRUE(no_signaling_from_joint(joints, reference).pass);
    // Shift mass inside one context so its B-marginal moves.
    joints[1].joint[0][0] += 0.01;
    joints[1].joint[0][1] -= 0.01;
    auto r = no_signaling_from_joint(joints, reference);
    ASSERT_FALSE(r.pass);
    ASSERT_NEAR(r.max_deviation, 0.01, 1e-12);
}

TEST(conditionalization, no_signaling_property_sweep) {
    Rng rng(derive_seed(61, 0));
    for (int trial = 0; trial < 40; ++trial) {
        Bipartition dims{2 + static_cast<std::size_t>(trial % 3), 2 + static_cast<std::size_t>((trial / 3) % 3)};
        auto psi = random_state(dims.total(), rng);
        const PVM contexts[] = {random_pvm(dims.dim_a, rng), random_pvm(dims.dim_a, rng), random_pvm(dims.dim_a, rng)};
        auto pvm_b = random_pvm(dims.dim_b, rng);
        auto r = no_signaling_check(psi, dims, contexts, pvm_b);
        ASSERT_TRUE(r.pass);
        ASSERT_LT(r.max_deviation, 1e-9);

        const std::size_t all[] = {dims.dim_a, dims.dim_b};
        auto rho_b = partial_trace(psi, all, kKeepB);
        for (const auto &c : contexts) {
            auto ens = remote_steering(psi, dims, c);
            ASSERT_LT(max_abs_diff(ens.mixture(), rho_b.matrix()), 1e-9);
        }
    }
}
