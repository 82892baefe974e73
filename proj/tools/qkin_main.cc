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

// qkin run --config <path> [--out <dir>] [--threshold <x>] [--parallel <k>]
//
// Exit status: 0 when every check of the demo passes, 1 when a check fails,
// 2 on bad input.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "qkin/demos.h"
#include "qkin/errors.h"

int main(int argc, char **argv) {
    CLI::App app{"qkin: quantum kinematics demos"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<double> threshold;
    unsigned parallel = 1;
    auto *run = app.add_subcommand("run", "Run a demo from a JSON config");
    run->add_option("--config", config_path, "Path to the run config")->required();
    run->add_option("--out", out_dir, "Output directory (overrides config and QKIN_OUTPUT_DIR)");
    run->add_option("--threshold", threshold, "Classicality threshold for the decoherence demo");
    run->add_option("--parallel", parallel, "Worker threads for independent replicas")
        ->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        qkin::RunConfig config = qkin::load_run_config(config_path);
        std::filesystem::path dir = ".";
        if (!out_dir.empty()) {
            dir = out_dir;
        } else if (!config.output_dir.empty()) {
            dir = config.output_dir;
        } else if (const char *env = std::getenv("QKIN_OUTPUT_DIR"); env && *env) {
            dir = env;
        }

        qkin::RunOptions options;
        options.threshold = threshold;
        options.parallel = parallel;
        qkin::DemoResult result = qkin::run_demo(config, options);
        for (const auto &path : qkin::write_artifacts(result, dir)) {
            std::cout << "wrote " << path.string() << "\n";
        }
        for (const auto &check : result.checks) {
            std::cout << (check.pass ? "  ok    " : "  FAIL  ") << check.name << "\n";
        }
        std::cout << config.demo << ": " << (result.pass() ? "all checks passed" : "checks failed") << "\n";
        return result.pass() ? 0 : 1;
    } catch (const qkin::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
