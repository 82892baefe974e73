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

#include "qkin/infoloss.h"

#include <algorithm>
#include <numbers>

#include "gtest/gtest.h"
#include "qkin/errors.h"
#include "qkin/random.h"
#include "test_util.h"

using namespace qkin;
using namespace qkin_test;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

FiducialSet fiducial_for(std::size_t d) { return d == 2 ? qubit_fiducial_set() : general_fiducial_set(d); }

}  // namespace

TEST(infoloss, hermitian_coordinates_round_trip) {
    Rng rng(derive_seed(80, 0));
    for (std::size_t d = 1; d <= 5; ++d) {
        auto h = random_hermitian(d, rng);
        auto x = hermitian_coordinates(h);
        ASSERT_EQ(x.size(), d * d);
        ASSERT_LT(max_abs_diff(hermitian_from_coordinates(x, d), h), 1e-14);
        // Orthonormal coordinates: the Euclidean norm is the Frobenius norm.
        double s = 0;
        for (double v : x) s += v * v;
        ASSERT_NEAR(std::sqrt(s), h.frobenius_norm(), 1e-12);
    }
}

TEST(infoloss, qubit_fiducial_set) {
    auto f = qubit_fiducial_set();
    ASSERT_EQ(f.dim(), 2u);
    ASSERT_EQ(f.observables().size(), 3u);
    ASSERT_EQ(f.observables()[0].label(), "Z");
    ASSERT_EQ(f.observables()[1].label(), "X");
    ASSERT_EQ(f.observables()[2].label(), "Y");
    ASSERT_EQ(completeness_rank(f.observables(), 2), 4u);
}

TEST(infoloss, removing_an_observable_breaks_completeness) {
    auto f = qubit_fiducial_set();
    for (std::size_t drop = 0; drop < 3; ++drop) {
        std::vector<PVM> rest;
        for (std::size_t m = 0; m < 3; ++m) {
            if (m != drop) rest.push_back(f.observables()[m]);
        }
        ASSERT_EQ(completeness_rank(rest, 2), 3u);
        ASSERT_THROW(FiducialSet{rest}, InvariantError);
    }
}

TEST(infoloss, general_fiducial_sets_are_complete) {
    for (std::size_t d = 2; d <= 5; ++d) {
        auto f = general_fiducial_set(d);
        ASSERT_EQ(f.observables().size(), 1 + d * (d - 1));
        ASSERT_EQ(completeness_rank(f.observables(), d), d * d);
    }
    ASSERT_THROW(general_fiducial_set(1), DimensionError);
    ASSERT_THROW(general_fiducial_set(9), DimensionError);
}

TEST(infoloss, exact_statistics_examples) {
    auto f = qubit_fiducial_set();
    auto uniform = exact_statistics(DensityOperator::maximally_mixed(2), f);
    for (const auto &row : uniform.observables()) {
        ASSERT_NEAR(row.probabilities[0], 0.5, 1e-15);
        ASSERT_NEAR(row.probabilities[1], 0.5, 1e-15);
    }
    ASSERT_EQ(uniform.provenance().kind, Provenance::Kind::exact);

    auto zero = exact_statistics(DensityOperator::pure(StateVector::basis(2, 0)), f);
    ASSERT_NEAR(zero.observables()[0].probabilities[0], 1.0, 1e-15);
    ASSERT_NEAR(zero.observables()[0].probabilities[1], 0.0, 1e-15);
    for (std::size_t m = 1; m < 3; ++m) {
        ASSERT_NEAR(zero.observables()[m].probabilities[0], 0.5, 1e-15);
    }
    ASSERT_THROW(exact_statistics(DensityOperator::maximally_mixed(3), f), DimensionError);
}

TEST(infoloss, exact_round_trip) {
    Rng rng(derive_seed(81, 0));
    for (std::size_t d = 2; d <= 4; ++d) {
        auto f = fiducial_for(d);
        for (int trial = 0; trial < 10; ++trial) {
            auto rho = trial % 2 ? random_density(d, rng) : DensityOperator::pure(random_state(d, rng));
            auto r = reconstruct_state_detailed(exact_statistics(rho, f), f);
            ASSERT_LT(trace_distance(rho, r.state), 1e-9) << "d=" << d;
            ASSERT_FALSE(r.flagged);
        }
    }
    auto f = qubit_fiducial_set();
    auto zero = reconstruct_state(exact_statistics(DensityOperator::pure(StateVector::basis(2, 0)), f), f);
    ASSERT_LT(max_abs_diff(zero.matrix(), StateVector::basis(2, 0).outer()), 1e-9);
    auto mixed = reconstruct_state(exact_statistics(DensityOperator::maximally_mixed(2), f), f);
    ASSERT_LT(max_abs_diff(mixed.matrix(), 0.5 * ComplexMatrix::identity(2)), 1e-12);
}

TEST(infoloss, sampled_statistics_basics) {
    auto f = qubit_fiducial_set();
    Rng rng(derive_seed(82, 0));
    auto rho = random_density(2, rng);
    auto one = sampled_statistics(rho, f, 1, 5);
    for (const auto &row : one.observables()) {
        ASSERT_EQ(std::max(row.probabilities[0], row.probabilities[1]), 1.0);
        ASSERT_EQ(row.counts[0] + row.counts[1], 1u);
    }
    auto a = sampled_statistics(rho, f, 500, 9);
    auto b = sampled_statistics(rho, f, 500, 9);
    auto c = sampled_statistics(rho, f, 500, 10);
    bool differs = false;
    for (std::size_t m = 0; m < 3; ++m) {
        ASSERT_EQ(a.observables()[m].counts, b.observables()[m].counts);
        differs = differs || a.observables()[m].counts != c.observables()[m].counts;
    }
    ASSERT_TRUE(differs);
    ASSERT_EQ(a.provenance().kind, Provenance::Kind::sampled);
    ASSERT_EQ(a.provenance().n, 500u);
    ASSERT_THROW(sampled_statistics(rho, f, 0, 1), InvariantError);
}

TEST(infoloss, sampled_reconstruction_is_close) {
    auto f = qubit_fiducial_set();
    Rng rng(derive_seed(83, 0));
    auto rho = random_density(2, rng);
    auto r = reconstruct_state(sampled_statistics(rho, f, 10000, 17), f);
    ASSERT_LT(trace_distance(rho, r), 0.05);
}

TEST(infoloss, sampled_error_shrinks_with_n) {
    // Median over 24 states: error at 4n is at most 0.7 of the error at n.
    for (std::size_t d : {2, 3}) {
        auto f = fiducial_for(d);
        std::vector<double> small, large;
        for (std::uint64_t s = 0; s < 24; ++s) {
            Rng rng(derive_seed(84, s));
            auto rho = random_density(d, rng);
            small.push_back(trace_distance(rho, reconstruct_state_detailed(sampled_statistics(rho, f, 200, s), f).state));
            large.push_back(
                trace_distance(rho, reconstruct_state_detailed(sampled_statistics(rho, f, 800, s + 1000), f).state));
        }
        ASSERT_LE(median(large), 0.7 * median(small)) << "d=" << d;
    }
}

TEST(infoloss, table_validation) {
    ASSERT_THROW(ProbabilityTable({{"A", {"0", "1"}, {0.5, 0.6}, {}}}, Provenance{}), InvariantError);
    ASSERT_THROW(ProbabilityTable({{"A", {"0", "1"}, {1.2, -0.2}, {}}}, Provenance{}), InvariantError);
    ASSERT_THROW(ProbabilityTable({{"A", {"0"}, {0.5, 0.5}, {}}}, Provenance{}), DimensionError);
    Provenance sampled{Provenance::Kind::sampled, 4, 0};
    ASSERT_THROW(ProbabilityTable({{"A", {"0", "1"}, {0.5, 0.5}, {}}}, sampled), InvariantError);
    ASSERT_THROW(ProbabilityTable({{"A", {"0", "1"}, {0.5, 0.5}, {1, 2}}}, sampled), InvariantError);
    ASSERT_NO_THROW(ProbabilityTable({{"A", {"0", "1"}, {0.25, 0.75}, {1, 3}}}, sampled));
}

TEST(infoloss, reconstruction_rejects_misshaped_table) {
    auto f = qubit_fiducial_set();
    auto g = general_fiducial_set(3);
    auto table = exact_statistics(DensityOperator::maximally_mixed(3), g);
    ASSERT_THROW(reconstruct_state(table, f), DimensionError);
}

TEST(infoloss, infeasible_table_is_flagged) {
    // Point masses on +z, +x and +y at once: the unclipped estimate has Bloch
    // vector (1, 1, 1).
    auto f = qubit_fiducial_set();
    std::vector<ObservableStatistics> rows;
    for (const auto &pvm : f.observables()) {
        rows.push_back({pvm.label(), pvm.outcome_labels(), {1.0, 0.0}, {}});
    }
    ProbabilityTable table(rows, Provenance{});
    auto r = reconstruct_state_detailed(table, f);
    // Estimate eigenvalues (1 +/- sqrt3)/2; clipping moves it by (sqrt3 - 1)/2.
    ASSERT_NEAR(r.projection_distance, (std::sqrt(3.0) - 1) / 2, 1e-9);
    ASSERT_FALSE(r.flagged);

    // A table outside the feasible region by more than the bound must throw.
    auto g = general_fiducial_set(3);
    std::vector<ObservableStatistics> wild;
    for (const auto &pvm : g.observables()) {
        wild.push_back({pvm.label(), pvm.outcome_labels(), {1.0, 0.0, 0.0}, {}});
    }
    ProbabilityTable wild_table(wild, Provenance{});
    auto w = reconstruct_state_detailed(wild_table, g);
    if (w.flagged) {
        ASSERT_THROW(reconstruct_state(wild_table, g), InvariantError);
    } else {
        ASSERT_NO_THROW(reconstruct_state(wild_table, g));
    }
}

TEST(infoloss, product_measure_examples) {
    auto f = qubit_fiducial_set();
    auto zero = exact_statistics(DensityOperator::pure(StateVector::basis(2, 0)), f);
    auto joint = product_measure(zero);
    ASSERT_EQ(joint.atom_count(), 8u);
    ASSERT_EQ(joint.shape, (std::vector<std::size_t>{2, 2, 2}));
    // Atom (z+, x+, y+) is index 0.
    ASSERT_NEAR(joint.probabilities[0], 0.25, 1e-15);
    for (std::size_t m = 0; m < 3; ++m) {
        auto marginal = joint.marginal(m);
        for (std::size_t a = 0; a < 2; ++a) {
            ASSERT_NEAR(marginal[a], zero.observables()[m].probabilities[a], 1e-15);
        }
    }

    ProbabilityTable single({{"A", {"a", "b", "c"}, {0.2, 0.3, 0.5}, {}}}, Provenance{});
    ASSERT_EQ(product_measure(single).probabilities, (std::vector<double>{0.2, 0.3, 0.5}));
    ASSERT_THROW(joint.marginal(3), DimensionError);
}

TEST(infoloss, product_measure_marginals_sweep) {
    Rng rng(derive_seed(85, 0));
    auto f = general_fiducial_set(3);
    for (int trial = 0; trial < 5; ++trial) {
        auto table = exact_statistics(random_density(3, rng), f);
        auto joint = product_measure(table);
        ASSERT_LE(joint.atom_count(), static_cast<std::size_t>(std::pow(3.0, 7.0)));
        double total = 0;
        for (double p : joint.probabilities) total += p;
        ASSERT_NEAR(total, 1.0, 1e-12);
        for (std::size_t m = 0; m < table.observables().size(); ++m) {
            auto marginal = joint.marginal(m);
            for (std::size_t a = 0; a < marginal.size(); ++a) {
                ASSERT_NEAR(marginal[a], table.observables()[m].probabilities[a], 1e-12);
            }
        }
    }
}

TEST(infoloss, product_measure_size_cap) {
    auto f = general_fiducial_set(4);  // 4^13 atoms
    auto table = exact_statistics(DensityOperator::maximally_mixed(4), f);
    ASSERT_THROW(product_measure(table), DimensionError);
}

TEST(infoloss, pipeline_on_maximally_mixed_source) {
    for (std::size_t d : {2, 3}) {
        auto f = fiducial_for(d);
        auto r = measure_prepare_pipeline(DensityOperator::maximally_mixed(d), f, 600, 3);
        ASSERT_LT(r.disturbance, 1e-12);
        ASSERT_GT(r.clone_distance, 0.0);
        std::uint64_t copies = 0;
        for (auto c : r.copies_per_observable) copies += c;
        ASSERT_EQ(copies, 600u);
    }
}

TEST(infoloss, dephasing_plus_in_z_basis) {
    auto plus_state = DensityOperator::pure(plus());
    // |+> measured in Z always lands on the equal mixture.
    auto f = qubit_fiducial_set();
    auto r = measure_prepare_pipeline(plus_state, f, 3000, 4);
    ASSERT_NEAR(trace_distance(plus_state, r.disturbed_states[0]), 0.5, 1e-12);
    ASSERT_NEAR(trace_distance(plus_state, r.disturbed_states[1]), 0.0, 1e-12);
    ASSERT_NEAR(trace_distance(plus_state, r.disturbed_states[2]), 0.5, 1e-12);
    ASSERT_GT(r.disturbance, 0.3);
    ASSERT_LT(r.disturbance, 0.37);
}

TEST(infoloss, pipeline_never_clones_pure_sources) {
    for (std::uint64_t s = 0; s < 12; ++s) {
        std::size_t d = 2 + s % 2;
        Rng rng(derive_seed(86, s));
        auto source = DensityOperator::pure(random_state(d, rng));
        auto r = measure_prepare_pipeline(source, fiducial_for(d), 1500, s);
        ASSERT_TRUE(r.disturbance > 0.01 || r.clone_distance > 0.01);
        ASSERT_GT(r.disturbance, 0.0);
        ASSERT_LT(r.clone_fidelity, 1.0);
    }
}

TEST(infoloss, pipeline_is_schedule_independent) {
    Rng rng(derive_seed(87, 0));
    auto source = DensityOperator::pure(random_state(3, rng));
    auto f = general_fiducial_set(3);
    auto a = measure_prepare_pipeline(source, f, 1000, 21, 1);
    auto b = measure_prepare_pipeline(source, f, 1000, 21, 4);
    ASSERT_EQ(a.copies_per_observable, b.copies_per_observable);
    ASSERT_EQ(a.disturbance, b.disturbance);
    ASSERT_EQ(a.prepared.matrix(), b.prepared.matrix());
    ASSERT_THROW(measure_prepare_pipeline(source, f, 0, 1), InvariantError);
}

TEST(infoloss, pipeline_with_few_copies_falls_back_to_uniform) {
    auto f = general_fiducial_set(3);
    auto r = measure_prepare_pipeline(DensityOperator::maximally_mixed(3), f, 2, 8);
    ASSERT_GE(r.unmeasured_observables, 5u);
}

TEST(infoloss, tensor_power_overlap) {
    const double angle = 2 * std::numbers::pi / 3;
    auto e = ket({1.0, 0.0});
    auto f = ket({std::cos(angle), std::sin(angle)});
    ASSERT_NEAR(tensor_power_overlap(e, f, 1), 0.25, 1e-12);
    ASSERT_NEAR(tensor_power_overlap(e, f, 5), 9.765625e-4, 1e-12);
    double previous = 1;
    for (unsigned n = 1; n <= 20; ++n) {
        double v = tensor_power_overlap(e, f, n);
        ASSERT_NEAR(v, std::pow(4.0, -static_cast<double>(n)), 1e-12);
        ASSERT_LT(v, previous);
        previous = v;
        ASSERT_EQ(tensor_power_overlap(e, e, n), 1.0);
    }
    ASSERT_THROW(tensor_power_overlap(e, f, 0), InvariantError);
}
