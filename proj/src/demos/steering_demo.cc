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

// The qutrit-qubit steering example: one entangled state written as two
// different trine decompositions, its reduced states, and what happens to
// the plane P_A once Alice's qutrit is conditioned on a single outcome.

#include <cmath>

#include "params.h"
#include "qkin/conditionalization.h"
#include "qkin/config.h"
#include "qkin/demos.h"

namespace qkin {

namespace {

double vector_distance(std::span<const Complex> a, std::span<const Complex> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(s);
}

}  // namespace

DemoResult run_steering(const RunConfig &config, const RunOptions &) {
    demo_detail::Params params(config.params, "steering");
    const bool corrupt = params.flag("inject_corruption", false);
    const double corruption = params.number("corruption_amplitude", 0.05);
    params.finish();

    const SteeringExample ex = build_steering_example();
    const auto dims = SteeringExample::dims;

    // The checks below run against `psi`; with corruption enabled it is
    // nudged off the example state, so they must fail.
    StateVector psi = ex.psi_ab;
    if (corrupt) {
        std::vector<Complex> amps(psi.amplitudes().begin(), psi.amplitudes().end());
        amps[0] += corruption;
        psi = StateVector::normalized(std::move(amps));
    }

    DemoResult result;
    auto check = [&](std::string name, bool ok) { result.checks.push_back({std::move(name), ok}); };
    Json &r = result.report;

    auto first = SteeringExample::decomposition(ex.basis_a, ex.trine_1);
    auto second = SteeringExample::decomposition(ex.basis_a_prime, ex.trine_2);
    double d1 = vector_distance(psi.amplitudes(), first);
    double d2 = vector_distance(psi.amplitudes(), second);
    auto inv = steering_invariants(ex);
    r["decompositions"] = Json{{"first_deviation", d1},
                               {"second_deviation", d2},
                               {"trine_overlap_deviation", std::max(inv.trine_1_overlap, inv.trine_2_overlap)},
                               {"trine_mixture_deviation", std::max(inv.trine_1_mixture, inv.trine_2_mixture)}};
    check("decompositions_agree", d1 <= 1e-10 && d2 <= 1e-10);
    check("trines_valid", std::max({inv.trine_1_overlap, inv.trine_2_overlap, inv.trine_1_mixture,
                                    inv.trine_2_mixture}) <= 1e-10);

    const std::size_t all_dims[] = {dims.dim_a, dims.dim_b};
    const std::size_t keep_b[] = {1}, keep_a[] = {0};
    auto rho_b = partial_trace(psi, all_dims, keep_b);
    double rho_b_dev = max_abs_diff(rho_b.matrix(), 0.5 * ComplexMatrix::identity(2));
    r["rho_b"] = matrix_to_json(rho_b.matrix());
    r["rho_b_deviation"] = rho_b_dev;
    check("rho_b_maximally_mixed", rho_b_dev <= 1e-12);

    auto schmidt = schmidt_decompose(psi, dims.dim_a, dims.dim_b);
    r["schmidt_coefficients"] = schmidt.coefficients;
    bool schmidt_ok = schmidt.coefficients.size() == 2;
    for (double c : schmidt.coefficients) {
        schmidt_ok = schmidt_ok && std::abs(c - std::sqrt(0.5)) <= 1e-10;
    }
    check("schmidt_coefficients", schmidt_ok);

    const StateVector plane_vectors[] = {ex.g, ex.h};
    Projector plane = projector_onto_span(plane_vectors);
    auto rho_a = partial_trace(psi, all_dims, keep_a);
    Projector support = support_projector(rho_a);
    double rho_a_dev = max_abs_diff(rho_a.matrix(), 0.5 * plane.matrix());
    r["rho_a"] = matrix_to_json(rho_a.matrix());
    r["rho_a_eigenvalues"] = hermitian_eig(rho_a.matrix()).values;
    r["rho_a_deviation"] = rho_a_dev;
    r["rho_a_support_rank"] = support.rank();
    check("rho_a_half_plane_projector", rho_a_dev <= 1e-10 && support.rank() == 2);

    PVM a = ex.pvm_a(), a_prime = ex.pvm_a_prime();
    const PVM contexts[] = {a, a_prime};
    auto ns = no_signaling_check(psi, dims, contexts, ex.pvm_b());
    r["no_signaling"] = no_signaling_to_json(ns);
    check("no_signaling", ns.pass);

    Json ensembles = Json::array();
    double refinement = 0;
    for (const auto &pvm : contexts) {
        auto ens = remote_steering(psi, dims, pvm);
        double dev = max_abs_diff(ens.mixture(), rho_b.matrix());
        refinement = std::max(refinement, dev);
        Json states = Json::array();
        for (const auto &s : ens.states) {
            states.push_back(matrix_to_json(s.matrix()));
        }
        ensembles.push_back(Json{{"context", pvm.label()},
                                 {"outcomes", ens.outcome_labels},
                                 {"weights", ens.weights},
                                 {"states", states},
                                 {"mixture_deviation", dev}});
    }
    r["steered_ensembles"] = ensembles;
    check("ensembles_mix_to_rho_b", refinement <= 1e-9);

    // Condition the qutrit on its first outcome and ask for P_A again.
    Projector event = a.elements()[0];
    double before = born_probability(rho_a, plane);
    auto update = luders_update(rho_a, event);
    double after = born_probability(update.posterior, plane);
    r["conditioning_event"] = a.outcome_labels()[0];
    r["event_probability"] = update.probability;
    r["plane_probability_before"] = before;
    r["plane_probability_after"] = after;
    r["posterior"] = matrix_to_json(update.posterior.matrix());
    check("plane_probability_before_is_one", std::abs(before - 1.0) <= 1e-9);
    check("plane_probability_after_two_thirds", std::abs(after - 2.0 / 3.0) <= 1e-9);

    demo_detail::finalize_report(result, config, params);
    result.artifacts.push_back({"steering_report.json", dump_json(result.report)});
    return result;
}

}  // namespace qkin
