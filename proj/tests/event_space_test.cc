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

#include <numbers>

#include "gtest/gtest.h"
#include "qkin/errors.h"
#include "qkin/random.h"
#include "test_util.h"

using namespace qkin;
using namespace qkin_test;

TEST(event_space, projector_validation) {
    ASSERT_THROW(Projector(ComplexMatrix(2, 2, {1.0, 1.0, 0.0, 0.0})), InvariantError);  // not Hermitian
    ASSERT_THROW(Projector(ComplexMatrix(2, 2, {0.5, 0.0, 0.0, 0.5})), InvariantError);  // not idempotent
    ASSERT_THROW(Projector(ComplexMatrix(2, 3)), DimensionError);
    Projector p(plus().outer());
    ASSERT_EQ(p.rank(), 1u);
    ASSERT_EQ(p.complement().rank(), 1u);
    ASSERT_EQ(Projector(ComplexMatrix::identity(3)).rank(), 3u);
    ASSERT_EQ(Projector(ComplexMatrix(3, 3)).rank(), 0u);
}

TEST(event_space, projector_onto_span_rejects_dependent_family) {
    const StateVector same[] = {plus(), plus()};
    ASSERT_THROW(projector_onto_span(same), InvariantError);
    // Non-orthogonal but independent vectors span the full plane.
    const StateVector pair[] = {StateVector::basis(2, 0), plus()};
    auto p = projector_onto_span(pair);
    ASSERT_LT(max_abs_diff(p.matrix(), ComplexMatrix::identity(2)), 1e-12);
}

TEST(event_space, pvm_validation) {
    Projector z0(StateVector::basis(2, 0).outer());
    Projector xp(plus().outer());
    ASSERT_THROW(PVM("bad", {z0, xp}), InvariantError);  // not orthogonal
    ASSERT_THROW(PVM("partial", {z0}), InvariantError);  // incomplete
    ASSERT_THROW(PVM("mixed", {z0, Projector(ComplexMatrix::identity(3))}), DimensionError);
    ASSERT_THROW(PVM("labels", {z0, z0.complement()}, {"only one"}), DimensionError);
    PVM z("Z", {z0, z0.complement()});
    ASSERT_EQ(z.outcome_labels(), (std::vector<std::string>{"0", "1"}));
    ASSERT_EQ(z.find(z0), std::optional<std::size_t>(0));
    ASSERT_EQ(z.find(xp), std::nullopt);
}

TEST(event_space, transition_probability_trines) {
    const double angle = 2 * std::numbers::pi / 3;
    auto e = ket({1.0, 0.0});
    auto f = ket({std::cos(angle), std::sin(angle)});
    ASSERT_NEAR(transition_probability(e, f), 0.25, 1e-15);
    ASSERT_NEAR(transition_probability(e, e), 1.0, 1e-15);
    ASSERT_NEAR(transition_probability(e, ket({0.0, 1.0})), 0.0, 1e-15);
    ASSERT_THROW(transition_probability(e, StateVector::basis(3, 0)), DimensionError);
}

TEST(event_space, born_probability_examples) {
    auto mixed = DensityOperator::maximally_mixed(2);
    ASSERT_NEAR(born_probability(mixed, Projector(StateVector::basis(2, 0).outer())), 0.5, 1e-15);
    auto rho = DensityOperator::pure(plus());
    ASSERT_NEAR(born_probability(rho, Projector(plus().outer())), 1.0, 1e-15);
    ASSERT_NEAR(born_probability(rho, Projector(ComplexMatrix(2, 2))), 0.0, 1e-15);
    ASSERT_THROW(born_probability(rho, Projector(ComplexMatrix::identity(3))), DimensionError);
}

TEST(event_space, additivity_examples) {
    auto mixed = DensityOperator::maximally_mixed(2);
    auto r = pvm_additivity_check(mixed, PVM::computational(2));
    ASSERT_TRUE(r.pass);
    ASSERT_NEAR(r.probabilities[0], 0.5, 1e-15);
    ASSERT_NEAR(r.probabilities[1], 0.5, 1e-15);
    ASSERT_NEAR(r.sum, 1.0, 1e-15);
}

TEST(event_space, random_pvm_is_valid) {
    Rng rng(derive_seed(50, 0));
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t d = 1 + trial % 6;
        auto pvm = random_pvm(d, rng);
        ASSERT_GE(pvm.size(), 1u);
        ASSERT_LE(pvm.size(), d);
        std::size_t total_rank = 0;
        ComplexMatrix sum(d, d);
        for (const auto &p : pvm.elements()) {
            ASSERT_GE(p.rank(), 1u);
            total_rank += p.rank();
            sum += p.matrix();
        }
        ASSERT_EQ(total_rank, d);
        ASSERT_LT(max_abs_diff(sum, ComplexMatrix::identity(d)), 1e-10);
    }
    ASSERT_EQ(random_pvm(4, rng, 4).size(), 4u);
    ASSERT_EQ(random_pvm(4, rng, 1).size(), 1u);
    ASSERT_THROW(random_pvm(3, rng, 4), DimensionError);
}

TEST(event_space, gleason_form_property_sweep) {
    // Born probabilities are nonnegative, add to one in every context, and a
    // shared event has the same probability in every context containing it.
    Rng rng(derive_seed(51, 0));
    for (int trial = 0; trial < 90; ++trial) {
        std::size_t d = 3 + trial % 3;
        auto rho = random_density(d, rng);
        auto pvm = random_pvm(d, rng);
        auto add = pvm_additivity_check(rho, pvm);
        ASSERT_TRUE(add.pass);
        ASSERT_NEAR(add.sum, 1.0, 1e-9);
        for (double p : add.probabilities) {
            ASSERT_GE(p, 0.0);
        }
        auto shared = pvm.elements().front();
        if (shared.rank() == d) {
            continue;
        }
        auto [c1, c2] = random_contexts_sharing(shared, rng);
        const PVM contexts[] = {pvm, c1, c2};
        auto nc = noncontextuality_check(rho, shared, contexts);
        ASSERT_TRUE(nc.pass);
        ASSERT_LT(nc.max_difference, 1e-10);
        ASSERT_EQ(nc.probabilities.size(), 3u);
    }
}

TEST(event_space, noncontextuality_requires_membership) {
    Rng rng(derive_seed(52, 0));
    auto rho = random_density(3, rng);
    Projector shared(StateVector::basis(3, 0).outer());
    auto [c1, c2] = random_contexts_sharing(shared, rng);
    ASSERT_TRUE(c1.find(shared).has_value());
    ASSERT_TRUE(c2.find(shared).has_value());
    const PVM contexts[] = {c1, random_pvm(3, rng, 3)};
    ASSERT_THROW(noncontextuality_check(rho, shared, contexts), InvariantError);
}

TEST(event_space, plane_completed_two_ways) {
    // The plane through g and h, met in differently built contexts.
    auto a = StateVector::basis(3, 0);
    auto g = StateVector::normalized({2.0, -1.0, -1.0});
    auto h = StateVector::normalized({0.0, 1.0, -1.0});
    auto k = StateVector::normalized({1.0, 1.0, 1.0});
    const StateVector plane_vectors[] = {g, h};
    Projector plane = projector_onto_span(plane_vectors);
    PVM first("coarse", {plane, Projector(k.outer())});
    Rng rng(derive_seed(53, 0));
    auto [c1, c2] = random_contexts_sharing(plane, rng);
    const PVM contexts[] = {first, c1, c2};
    auto rho = DensityOperator::pure(a);
    auto nc = noncontextuality_check(rho, plane, contexts);
    ASSERT_TRUE(nc.pass);
    ASSERT_NEAR(nc.probabilities[0], 2.0 / 3.0, 1e-12);
}

TEST(event_space, embeddings) {
    Projector p(plus().outer());
    auto left = embed_left(p, 3);
    auto right = embed_right(3, p);
    ASSERT_EQ(left.dim(), 6u);
    ASSERT_EQ(left.rank(), 3u);
    ASSERT_EQ(right.rank(), 3u);
    ASSERT_LT(max_abs_diff(left.matrix(), tensor_product(p.matrix(), ComplexMatrix::identity(3))), 1e-15);
    auto pvm = embed_right(2, PVM::computational(3));
    ASSERT_EQ(pvm.size(), 3u);
    ASSERT_EQ(pvm.dim(), 6u);
}
