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

/// Config-driven demo runners behind the `qkin` command line tool.
///
/// A run config is a single JSON object
///
///   {"demo": "steering" | "decoherence" | "tomography" | "infoloss",
///    "seed": <uint64>, "params": {...}, "output_dir": "<path>"}
///
/// Unknown keys are rejected. Every demo merges its defaults into `params`
/// and echoes the result into its JSON artifact, so an artifact records
/// everything needed to reproduce it. Artifacts depend only on (demo, seed,
/// params); the output location and thread count never leak into them.

#ifndef QKIN_DEMOS_H
#define QKIN_DEMOS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qkin/json_io.h"

namespace qkin {

struct RunConfig {
    std::string demo;
    std::optional<std::uint64_t> seed;
    Json params = Json::object();
    std::string output_dir;
};

/// Throws ParseError on malformed input or an unknown demo name.
RunConfig parse_run_config(const Json &j);
RunConfig load_run_config(const std::filesystem::path &path);

struct RunOptions {
    /// Overrides the decoherence classicality threshold.
    std::optional<double> threshold;
    /// Worker threads for independent replicas; results do not depend on it.
    unsigned parallel = 1;
};

struct DemoCheck {
    std::string name;
    bool pass = false;
};

struct Artifact {
    std::string filename;
    std::string content;
};

struct DemoResult {
    Json report;
    std::vector<DemoCheck> checks;
    std::vector<Artifact> artifacts;

    /// True when every check passed.
    bool pass() const;
};

/// The runners build their artifacts in memory and never touch the file
/// system. Throw ParseError on bad params.
DemoResult run_steering(const RunConfig &config, const RunOptions &options = {});
DemoResult run_decoherence(const RunConfig &config, const RunOptions &options = {});
DemoResult run_tomography(const RunConfig &config, const RunOptions &options = {});
DemoResult run_infoloss(const RunConfig &config, const RunOptions &options = {});

/// Dispatches on config.demo.
DemoResult run_demo(const RunConfig &config, const RunOptions &options = {});

/// Writes every artifact into `dir`, creating it if needed. Returns the paths.
std::vector<std::filesystem::path> write_artifacts(const DemoResult &result, const std::filesystem::path &dir);

/// 17 significant digits, '.' decimal separator.
std::string format_number(double x);

}  // namespace qkin

#endif
