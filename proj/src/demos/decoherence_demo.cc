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

#include <cmath>
#include <numbers>

#include "params.h"
#include "qkin/config.h"
#include "qkin/decoherence.h"
#include "qkin/demos.h"

namespace qkin {

namespace {

// Two environment modes with couplings (0, 0) and (1, 2): the two
// environment branches become orthogonal at t = pi. Both pointer states carry
// the same system ket, so classicality reduces to |zeta|.
Json default_state() {
    const double r = std::sqrt(0.5);
    return Json{{"gamma_re", {r, r}},
                {"gamma_im", {0.0, 0.0}},
                {"couplings", {{0.0, 0.0}, {1.0, 2.0}}},
                {"c_re", {r, r}},
                {"c_im", {0.0, 0.0}},
                {"s_vectors", {Json{{"re", {1.0, 0.0}}, {"im", {0.0, 0.0}}}, Json{{"re", {1.0, 0.0}}, {"im", {0.0, 0.0}}}}}};
}

std::vector<double> parse_grid(const Json &j, const std::string &where) {
    if (j.is_array()) {
        return json_number_array(j, where);
    }
    if (!j.is_object()) {
        throw ParseError(where + ": expected an array or {start, stop, steps}");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "start" && it.key() != "stop" && it.key() != "steps") {
            throw ParseError(where + ": unknown key '" + it.key() + "'");
        }
    }
    if (!j.contains("start") || !j.contains("stop") || !j.contains("steps")) {
        throw ParseError(where + ": expected {start, stop, steps}");
    }
    double start = json_number(j["start"], where + ".start");
    double stop = json_number(j["stop"], where + ".stop");
    auto steps = json_unsigned(j["steps"], where + ".steps");
    if (steps == 0) {
        throw ParseError(where + ".steps: expected a positive integer");
    }
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = steps == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return grid;
}

std::string sweep_csv(const SweepTable &table) {
    std::string out = "t";
    for (auto [k, kp] : table.pairs) {
        out += ",zeta_" + std::to_string(k) + "_" + std::to_string(kp) + "_abs";
    }
    out += ",classicality\n";
    for (const auto &row : table.rows) {
        out += format_number(row.t);
        for (double z : row.abs_zeta) {
            out += "," + format_number(z);
        }
        out += "," + format_number(row.classicality) + "\n";
    }
    return out;
}

}  // namespace

DemoResult run_decoherence(const RunConfig &config, const RunOptions &options) {
    demo_detail::Params params(config.params, "decoherence");
    const bool random = params.has("random_environment");
    if (random && params.has("state")) {
        throw ParseError("decoherence: give either 'state' or 'random_environment', not both");
    }

    std::optional<TriDecomposedState> state;
    if (random) {
        Json spec = params.raw("random_environment", Json::object());
        demo_detail::Params rp(spec, "decoherence.random_environment");
        auto m_dim = rp.integer("m_dim", 2);
        auto n_env = rp.integer("n_env", 100);
        double scale = rp.number("coupling_scale", 1.0);
        rp.finish();
        if (m_dim < 1 || n_env < 1 || !(scale > 0)) {
            throw ParseError("decoherence.random_environment: m_dim, n_env and coupling_scale must be positive");
        }
        params.set_effective("random_environment", rp.effective());
        Rng rng(derive_seed(demo_detail::require_seed(config), 0));
        auto env = random_environment(m_dim, n_env, scale, rng);
        std::vector<Complex> c(m_dim, Complex(1.0 / std::sqrt(static_cast<double>(m_dim))));
        std::vector<StateVector> s(m_dim, StateVector::basis(1, 0));
        state.emplace(std::move(c), std::move(s), std::move(env));
    } else {
        state.emplace(tri_state_from_json(params.raw("state", default_state())));
    }

    const Json default_grid = random ? Json{{"start", 0.0}, {"stop", 400.0}, {"steps", 4001}}
                                     : Json{{"start", 0.0}, {"stop", 2 * std::numbers::pi}, {"steps", 129}};
    auto grid = parse_grid(params.raw("t_grid", default_grid), params.where("t_grid"));
    double threshold = params.number("threshold", tolerances().decoherence_threshold);
    if (options.threshold) {
        threshold = *options.threshold;
        params.set_effective("threshold", threshold);
    }
    // The long-time window is the second half of the grid.
    Json bound_default = random ? Json(0.3) : Json(nullptr);
    Json bound = params.raw("long_time_bound", bound_default);
    params.finish();
    if (!(threshold > 0 && threshold < 1)) {
        throw ParseError("decoherence: threshold must lie in (0, 1)");
    }
    if (grid.empty()) {
        throw ParseError("decoherence: empty t_grid");
    }

    SweepTable table;
    try {
        table = decoherence_sweep(*state, grid, options.parallel);
    } catch (const InvariantError &e) {
        throw ParseError(std::string("decoherence: ") + e.what());
    }

    DemoResult result;
    auto check = [&](std::string name, bool ok) { result.checks.push_back({std::move(name), ok}); };
    Json &r = result.report;

    const std::size_t m = state->m_dim();
    std::vector<double> values(m);
    for (std::size_t k = 0; k < m; ++k) {
        values[k] = static_cast<double>(k);
    }
    auto pointer = pointer_observable(values, state->env().n_env());
    auto h = build_interaction_hamiltonian(state->env(), m);
    double commutator_norm = commutator(pointer, h).max_abs();
    r["pointer_commutator_max_abs"] = commutator_norm;
    check("pointer_commutes_with_interaction", commutator_norm <= 1e-12);

    double max_zeta = 0;
    double min_classicality = table.rows.front().classicality;
    double t_min_classicality = table.rows.front().t;
    std::optional<double> first_classical;
    for (const auto &row : table.rows) {
        for (double z : row.abs_zeta) {
            max_zeta = std::max(max_zeta, z);
        }
        if (row.classicality < min_classicality) {
            min_classicality = row.classicality;
            t_min_classicality = row.t;
        }
        if (!first_classical && row.classicality < threshold) {
            first_classical = row.t;
        }
    }
    r["max_abs_zeta"] = max_zeta;
    check("zeta_bounded_by_one", max_zeta <= 1 + 1e-12);
    r["min_classicality"] = min_classicality;
    r["t_at_min_classicality"] = t_min_classicality;
    r["threshold"] = threshold;
    r["first_classical_t"] = first_classical ? Json(*first_classical) : Json(nullptr);
    if (first_classical) {
        auto algebra = emergent_boolean_algebra(*state, *first_classical, threshold);
        r["emergent_pointer_pvm"] = algebra.pointer_pvm ? pvm_to_json(*algebra.pointer_pvm) : Json(nullptr);
    }

    // Long-time average of |zeta| per pair over the second half of the grid.
    const std::size_t from = table.rows.size() / 2;
    Json averages = Json::array();
    double worst_average = 0;
    for (std::size_t p = 0; p < table.pairs.size(); ++p) {
        double sum = 0;
        for (std::size_t i = from; i < table.rows.size(); ++i) {
            sum += table.rows[i].abs_zeta[p];
        }
        double avg = sum / static_cast<double>(table.rows.size() - from);
        worst_average = std::max(worst_average, avg);
        averages.push_back(Json{{"pair", {table.pairs[p].first, table.pairs[p].second}}, {"average_abs_zeta", avg}});
    }
    r["long_time_average"] = averages;
    if (!bound.is_null()) {
        double b = json_number(bound, params.where("long_time_bound"));
        check("long_time_average_below_bound", worst_average < b);
    }

    // Closed form against the explicit tripartite state on up to 65 grid
    // points, plus conservation of the pointer populations.
    if (state->total_dim() <= tolerances().max_crosscheck_dim) {
        const std::size_t stride = std::max<std::size_t>(1, grid.size() / 64);
        double worst = 0, drift = 0;
        for (std::size_t i = 0; i < grid.size(); i += stride) {
            worst = std::max(worst, *reduced_state_crosscheck(*state, grid[i]));
            auto rho = reduced_macro_state(*state, grid[i]);
            for (std::size_t k = 0; k < m; ++k) {
                drift = std::max(drift, std::abs(rho.matrix()(k, k).real() - std::norm(state->c()[k])));
            }
        }
        r["crosscheck_max_abs_diff"] = worst;
        r["population_drift"] = drift;
        check("closed_form_matches_partial_trace", worst <= 1e-10);
        check("pointer_populations_conserved", drift <= 1e-12);
    } else {
        r["crosscheck_max_abs_diff"] = nullptr;
    }
    r["state"] = tri_state_to_json(*state);

    demo_detail::finalize_report(result, config, params);
    result.artifacts.push_back({"decoherence_sweep.csv", sweep_csv(table)});
    result.artifacts.push_back({"decoherence_summary.json", dump_json(result.report)});
    return result;
}

}  // namespace qkin
