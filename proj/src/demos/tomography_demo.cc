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

#include <algorithm>
#include <cmath>

#include "params.h"
#include "qkin/config.h"
#include "qkin/demos.h"
#include "qkin/infoloss.h"
#include "qkin/random.h"

namespace qkin {

namespace {

FiducialSet fiducial_for(std::size_t d) { return d == 2 ? qubit_fiducial_set() : general_fiducial_set(d); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

DemoResult run_tomography(const RunConfig &config, const RunOptions &options) {
    const std::uint64_t seed = demo_detail::require_seed(config);
    demo_detail::Params params(config.params, "tomography");
    auto d = params.integer("d", 2);
    auto mode = params.text("mode", "sampled");
    auto seeds = params.integer("seeds", 20);
    const bool sampled = mode == "sampled";
    if (!sampled && mode != "exact") {
        throw ParseError("tomography: mode must be 'sampled' or 'exact'");
    }
    std::vector<std::uint64_t> schedule;
    double exponent_lo = 0, exponent_hi = 0;
    if (sampled) {
        Json s = params.raw("schedule", Json{100, 400, 1600});
        if (!s.is_array() || s.empty()) {
            throw ParseError("tomography: schedule must be a nonempty array");
        }
        for (const auto &entry : s) {
            auto n = json_unsigned(entry, params.where("schedule"));
            if (n == 0) {
                throw ParseError("tomography: schedule entries must be positive");
            }
            if (!schedule.empty() && n <= schedule.back()) {
                throw ParseError("tomography: schedule must be strictly ascending");
            }
            schedule.push_back(n);
        }
        Json range = params.raw("exponent_range", Json{-0.65, -0.35});
        auto bounds = json_number_array(range, params.where("exponent_range"));
        if (bounds.size() != 2 || !(bounds[0] < bounds[1])) {
            throw ParseError("tomography: exponent_range must be [lo, hi] with lo < hi");
        }
        exponent_lo = bounds[0];
        exponent_hi = bounds[1];
    } else {
        params.claim("schedule");
        params.claim("exponent_range");
    }
    params.finish();
    if (d < 2 || d > tolerances().max_fiducial_dim) {
        throw ParseError("tomography: d must lie in [2, " + std::to_string(tolerances().max_fiducial_dim) + "]");
    }
    if (seeds == 0) {
        throw ParseError("tomography: seeds must be positive");
    }

    const FiducialSet f = fiducial_for(d);
    std::vector<DensityOperator> states;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(seed, 2 * s));
        states.push_back(random_density(d, rng));
    }

    DemoResult result;
    auto check = [&](std::string name, bool ok) { result.checks.push_back({std::move(name), ok}); };
    Json &r = result.report;
    r["fiducial_observables"] = f.observables().size();

    if (!sampled) {
        std::vector<double> errors(seeds);
        demo_detail::parallel_for(seeds, options.parallel, [&](std::size_t s) {
            errors[s] = trace_distance(states[s], reconstruct_state(exact_statistics(states[s], f), f));
        });
        std::string csv = "seed,trace_distance\n";
        for (std::size_t s = 0; s < seeds; ++s) {
            csv += std::to_string(s) + "," + format_number(errors[s]) + "\n";
        }
        double worst = *std::max_element(errors.begin(), errors.end());
        r["max_trace_distance"] = worst;
        check("exact_round_trip", worst < 1e-9);
        demo_detail::finalize_report(result, config, params);
        result.artifacts.push_back({"tomography_exact.csv", csv});
        result.artifacts.push_back({"tomography_summary.json", dump_json(result.report)});
        return result;
    }

    // errors[i][s]: schedule entry i, state s.
    std::vector<std::vector<double>> errors(schedule.size(), std::vector<double>(seeds));
    demo_detail::parallel_for(seeds, options.parallel, [&](std::size_t s) {
        const std::uint64_t state_seed = derive_seed(seed, 2 * s + 1);
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            auto table = sampled_statistics(states[s], f, schedule[i], derive_seed(state_seed, i));
            errors[i][s] = trace_distance(states[s], reconstruct_state_detailed(table, f).state);
        }
    });

    std::vector<double> medians;
    std::string csv = "n,median_trace_distance\n";
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        medians.push_back(median(errors[i]));
        csv += std::to_string(schedule[i]) + "," + format_number(medians.back()) + "\n";
    }

    bool decreasing = true;
    for (std::size_t i = 1; i < medians.size(); ++i) {
        decreasing = decreasing && medians[i] < medians[i - 1];
    }
    r["schedule"] = schedule;
    r["medians"] = medians;
    check("medians_decreasing", decreasing);

    if (schedule.size() >= 2) {
        // Least-squares slope of log(median) against log(n).
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            mx += std::log(static_cast<double>(schedule[i]));
            my += std::log(medians[i]);
        }
        mx /= static_cast<double>(schedule.size());
        my /= static_cast<double>(schedule.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            double dx = std::log(static_cast<double>(schedule[i])) - mx;
            sxy += dx * (std::log(medians[i]) - my);
            sxx += dx * dx;
        }
        double exponent = sxy / sxx;
        r["fitted_exponent"] = exponent;
        check("exponent_in_range", exponent >= exponent_lo && exponent <= exponent_hi);
    } else {
        r["fitted_exponent"] = nullptr;
    }

    demo_detail::finalize_report(result, config, params);
    result.artifacts.push_back({"tomography_scaling.csv", csv});
    result.artifacts.push_back({"tomography_summary.json", dump_json(result.report)});
    return result;
}

}  // namespace qkin
