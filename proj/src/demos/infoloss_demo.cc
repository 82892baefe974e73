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

// Runs the measure -> statistics -> prepare channel over a family of random
// pure sources and reports, per source, whether the channel both left the
// source undisturbed and produced a faithful copy. It never should.

#include <cmath>

#include "params.h"
#include "qkin/config.h"
#include "qkin/demos.h"
#include "qkin/infoloss.h"
#include "qkin/random.h"

namespace qkin {

namespace {

struct Source {
    std::string kind;
    DensityOperator state;
    std::uint64_t pipeline_seed;
    std::optional<StateVector> ket;
};

}  // namespace

DemoResult run_infoloss(const RunConfig &config, const RunOptions &options) {
    const std::uint64_t seed = demo_detail::require_seed(config);
    demo_detail::Params params(config.params, "infoloss");
    auto qubits = params.integer("qubit_sources", 25);
    auto qutrits = params.integer("qutrit_sources", 25);
    auto copies = params.integer("copies", 2000);
    double disturbance_floor = params.number("disturbance_floor", 0.01);
    double clone_floor = params.number("clone_floor", 0.01);
    bool control = params.flag("maximally_mixed_control", true);
    params.finish();
    if (copies == 0) {
        throw ParseError("infoloss: copies must be positive");
    }

    const FiducialSet qubit_set = qubit_fiducial_set();
    const FiducialSet qutrit_set = general_fiducial_set(3);

    std::vector<Source> sources;
    for (std::uint64_t s = 0; s < qubits + qutrits; ++s) {
        const std::size_t d = s < qubits ? 2 : 3;
        Rng rng(derive_seed(seed, 2 * s));
        StateVector psi = random_state(d, rng);
        sources.push_back({"pure", DensityOperator::pure(psi), derive_seed(seed, 2 * s + 1), psi});
    }
    if (control) {
        for (std::size_t d : {2, 3}) {
            sources.push_back({"maximally_mixed", DensityOperator::maximally_mixed(d),
                               derive_seed(derive_seed(seed, ~std::uint64_t{0}), d), std::nullopt});
        }
    }

    std::vector<std::optional<PipelineReport>> reports(sources.size());
    demo_detail::parallel_for(sources.size(), options.parallel, [&](std::size_t i) {
        const auto &src = sources[i];
        const FiducialSet &f = src.state.dim() == 2 ? qubit_set : qutrit_set;
        reports[i] = measure_prepare_pipeline(src.state, f, copies, src.pipeline_seed);
    });

    DemoResult result;
    Json rows = Json::array();
    bool all_loss = true, controls_fixed = true, controls_imperfect = true;
    double min_pure_disturbance = 1, min_pure_clone = 1;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto &src = sources[i];
        const auto &rep = *reports[i];
        Json row{{"index", i},
                 {"kind", src.kind},
                 {"dim", src.state.dim()},
                 {"source", src.ket ? state_to_json(*src.ket) : matrix_to_json(src.state.matrix())},
                 {"disturbance", rep.disturbance},
                 {"selective_disturbance", rep.selective_disturbance},
                 {"clone_distance", rep.clone_distance},
                 {"clone_fidelity", rep.clone_fidelity},
                 {"unmeasured_observables", rep.unmeasured_observables},
                 {"copies_per_observable", rep.copies_per_observable},
                 {"prepared", matrix_to_json(rep.prepared.matrix())}};
        if (src.kind == "pure") {
            bool loss = rep.disturbance >= disturbance_floor || rep.clone_distance >= clone_floor;
            row["verdict"] = loss ? "information loss" : "no loss detected";
            all_loss = all_loss && loss;
            min_pure_disturbance = std::min(min_pure_disturbance, rep.disturbance);
            min_pure_clone = std::min(min_pure_clone, rep.clone_distance);
        } else {
            bool fixed = rep.disturbance < 1e-12;
            row["verdict"] = fixed ? "fixed point" : "unexpected disturbance";
            row["flag"] =
                "maximally mixed source is invariant under every Lüders update; "
                "the prepared copy differs only through finite-sample noise";
            controls_fixed = controls_fixed && fixed;
            controls_imperfect = controls_imperfect && rep.clone_distance > 0;
        }
        rows.push_back(std::move(row));
    }

    result.report["sources"] = rows;
    result.report["min_pure_disturbance"] = min_pure_disturbance;
    result.report["min_pure_clone_distance"] = min_pure_clone;
    result.checks.push_back({"information_loss_on_every_pure_source", all_loss});
    if (control) {
        result.checks.push_back({"maximally_mixed_is_fixed_point", controls_fixed});
        result.checks.push_back({"maximally_mixed_clone_imperfect", controls_imperfect});
    }

    demo_detail::finalize_report(result, config, params);
    result.artifacts.push_back({"infoloss_report.json", dump_json(result.report)});
    return result;
}

}  // namespace qkin
