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

#ifndef QKIN_SRC_DEMOS_PARAMS_H
#define QKIN_SRC_DEMOS_PARAMS_H

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qkin/demos.h"
#include "qkin/errors.h"

namespace qkin::demo_detail {

/// Reads demo params with defaults, recording the effective value of every
/// key so it can be echoed. `finish` rejects keys nobody asked for.
class Params {
   public:
    Params(const Json &given, std::string demo) : given_(given), demo_(std::move(demo)) {
        if (!given_.is_object()) {
            throw ParseError(demo_ + ": params must be an object");
        }
    }

    bool has(const std::string &key) const { return given_.contains(key) && !given_[key].is_null(); }

    double number(const std::string &key, double fallback) {
        double v = has(key) ? json_number(given_[key], where(key)) : fallback;
        effective_[key] = v;
        return v;
    }

    std::uint64_t integer(const std::string &key, std::uint64_t fallback) {
        std::uint64_t v = has(key) ? json_unsigned(given_[key], where(key)) : fallback;
        effective_[key] = v;
        return v;
    }

    bool flag(const std::string &key, bool fallback) {
        bool v = fallback;
        if (has(key)) {
            if (!given_[key].is_boolean()) {
                throw ParseError(where(key) + ": expected true or false");
            }
            v = given_[key].get<bool>();
        }
        effective_[key] = v;
        return v;
    }

    std::string text(const std::string &key, const std::string &fallback) {
        std::string v = fallback;
        if (has(key)) {
            if (!given_[key].is_string()) {
                throw ParseError(where(key) + ": expected a string");
            }
            v = given_[key].get<std::string>();
        }
        effective_[key] = v;
        return v;
    }

    /// Raw JSON value, or `fallback` when absent.
    Json raw(const std::string &key, const Json &fallback) {
        Json v = has(key) ? given_[key] : fallback;
        effective_[key] = v;
        return v;
    }

    /// Marks a key as understood without echoing it.
    void claim(const std::string &key) { claimed_.insert(key); }

    void set_effective(const std::string &key, Json value) { effective_[key] = std::move(value); }

    const Json &effective() const { return effective_; }

    void finish() const {
        for (auto it = given_.begin(); it != given_.end(); ++it) {
            if (!effective_.contains(it.key()) && !claimed_.count(it.key())) {
                throw ParseError(demo_ + ": unknown parameter '" + it.key() + "'");
            }
        }
    }

    std::string where(const std::string &key) const { return demo_ + ".params." + key; }

   private:
    const Json &given_;
    std::string demo_;
    Json effective_ = Json::object();
    std::set<std::string> claimed_;
};

inline Json config_echo(const RunConfig &config, const Params &params) {
    Json echo{{"demo", config.demo}};
    echo["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
    echo["params"] = params.effective();
    return echo;
}

inline std::uint64_t require_seed(const RunConfig &config) {
    if (!config.seed) {
        throw ParseError(config.demo + ": a seed is required");
    }
    return *config.seed;
}

inline Json checks_to_json(const std::vector<DemoCheck> &checks) {
    Json out = Json::array();
    for (const auto &c : checks) {
        out.push_back(Json{{"name", c.name}, {"pass", c.pass}});
    }
    return out;
}

/// Attaches the config echo, check list and overall verdict to `report`.
inline void finalize_report(DemoResult &result, const RunConfig &config, const Params &params) {
    bool pass = result.pass();
    Json report{{"config", config_echo(config, params)}};
    for (auto it = result.report.begin(); it != result.report.end(); ++it) {
        report[it.key()] = it.value();
    }
    report["checks"] = checks_to_json(result.checks);
    report["pass"] = pass;
    result.report = std::move(report);
}

/// Runs `work(i)` for i in [0, count) on up to `threads` workers, strided.
/// Callers write into preallocated slots, so output order never depends on
/// the schedule.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F &&work) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, count))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) work(i);
        });
    }
    for (auto &t : workers) t.join();
}

}  // namespace qkin::demo_detail

#endif
