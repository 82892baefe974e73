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
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qkin/demos.h"
#include "qkin/errors.h"

namespace qkin {

RunConfig parse_run_config(const Json &j) {
    if (!j.is_object()) {
        throw ParseError("config: expected a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto &k = it.key();
        if (k != "demo" && k != "seed" && k != "params" && k != "output_dir") {
            throw ParseError("config: unknown key '" + k + "'");
        }
    }
    RunConfig config;
    if (!j.contains("demo") || !j["demo"].is_string()) {
        throw ParseError("config: 'demo' must be a string");
    }
    config.demo = j["demo"].get<std::string>();
    static const char *kDemos[] = {"steering", "decoherence", "tomography", "infoloss"};
    if (std::none_of(std::begin(kDemos), std::end(kDemos), [&](const char *d) { return config.demo == d; })) {
        throw ParseError("config: unknown demo '" + config.demo + "'");
    }
    if (j.contains("seed") && !j["seed"].is_null()) {
        config.seed = json_unsigned(j["seed"], "config.seed");
    }
    if (j.contains("params") && !j["params"].is_null()) {
        if (!j["params"].is_object()) {
            throw ParseError("config: 'params' must be an object");
        }
        config.params = j["params"];
    }
    if (j.contains("output_dir") && !j["output_dir"].is_null()) {
        if (!j["output_dir"].is_string()) {
            throw ParseError("config: 'output_dir' must be a string");
        }
        config.output_dir = j["output_dir"].get<std::string>();
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("config: cannot open '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError("config: " + std::string(e.what()));
    }
    return parse_run_config(j);
}

bool DemoResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const DemoCheck &c) { return c.pass; });
}

DemoResult run_demo(const RunConfig &config, const RunOptions &options) {
    if (config.demo == "steering") return run_steering(config, options);
    if (config.demo == "decoherence") return run_decoherence(config, options);
    if (config.demo == "tomography") return run_tomography(config, options);
    if (config.demo == "infoloss") return run_infoloss(config, options);
    throw ParseError("config: unknown demo '" + config.demo + "'");
}

std::vector<std::filesystem::path> write_artifacts(const DemoResult &result, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (const auto &a : result.artifacts) {
        auto path = dir / a.filename;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << a.content;
        if (!out) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace qkin
