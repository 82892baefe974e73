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

#include "qkin/demos.h"

#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "qkin/errors.h"

using namespace qkin;

namespace {

RunConfig config(const char *text) { return parse_run_config(Json::parse(text)); }

void expect_same_artifacts(const DemoResult &a, const DemoResult &b) {
    ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
        EXPECT_EQ(a.artifacts[i].filename, b.artifacts[i].filename);
        EXPECT_TRUE(a.artifacts[i].content == b.artifacts[i].content) << a.artifacts[i].filename;
    }
}

const char *kDefaults[] = {
    R"({"demo": "steering"})",
    R"({"demo": "decoherence"})",
    R"({"demo": "decoherence", "seed": 7, "params": {"random_environment": {}}})",
    R"({"demo": "tomography", "seed": 2026, "params": {"seeds": 8}})",
    R"({"demo": "tomography", "seed": 2026, "params": {"d": 4, "mode": "exact", "seeds": 5}})",
    R"({"demo": "infoloss", "seed": 11, "params": {"qubit_sources": 4, "qutrit_sources": 4, "copies": 600}})",
};

}  // namespace

TEST(demos, config_parsing) {
    auto c = config(R"({"demo": "tomography", "seed": 3, "params": {"d": 2}, "output_dir": "out"})");
    ASSERT_EQ(c.demo, "tomography");
    ASSERT_EQ(c.seed, std::optional<std::uint64_t>(3));
    ASSERT_EQ(c.output_dir, "out");
    ASSERT_THROW(config(R"({"demo": "teleport"})"), ParseError);
    ASSERT_THROW(config(R"({"demo": "steering", "sede": 1})"), ParseError);
    ASSERT_THROW(config(R"({"demo": "steering", "seed": -4})"), ParseError);
    ASSERT_THROW(config(R"({"demo": "steering", "params": []})"), ParseError);
    ASSERT_THROW(config(R"(["steering"])"), ParseError);
    ASSERT_THROW(load_run_config("/nonexistent/config.json"), ParseError);
}

TEST(demos, every_default_demo_passes) {
    for (const char *text : kDefaults) {
        auto result = run_demo(config(text));
        ASSERT_TRUE(result.pass()) << text;
        ASSERT_FALSE(result.checks.empty());
        ASSERT_FALSE(result.artifacts.empty());
        ASSERT_TRUE(result.report["pass"].get<bool>());
    }
}

TEST(demos, reruns_are_byte_identical) {
    for (const char *text : kDefaults) {
        expect_same_artifacts(run_demo(config(text)), run_demo(config(text)));
    }
}

TEST(demos, thread_count_does_not_change_artifacts) {
    for (const char *text : kDefaults) {
        RunOptions parallel;
        parallel.parallel = 3;
        expect_same_artifacts(run_demo(config(text)), run_demo(config(text), parallel));
    }
}

TEST(demos, output_dir_does_not_leak_into_artifacts) {
    auto a = run_demo(config(R"({"demo": "steering", "output_dir": "x"})"));
    auto b = run_demo(config(R"({"demo": "steering", "output_dir": "y"})"));
    expect_same_artifacts(a, b);
}

TEST(demos, steering_corruption_is_detected) {
    auto result = run_steering(config(R"({"demo": "steering", "params": {"inject_corruption": true}})"));
    ASSERT_FALSE(result.pass());
    ASSERT_FALSE(result.report["pass"].get<bool>());
}

TEST(demos, steering_report_values) {
    auto r = run_steering(config(R"({"demo": "steering"})")).report;
    ASSERT_NEAR(r["plane_probability_after"].get<double>(), 2.0 / 3.0, 1e-9);
    ASSERT_NEAR(r["event_probability"].get<double>(), 1.0 / 3.0, 1e-9);
    ASSERT_TRUE(r["config"]["params"].contains("inject_corruption"));
}

TEST(demos, decoherence_threshold_override) {
    auto c = config(R"({"demo": "decoherence"})");
    RunOptions strict;
    strict.threshold = 1e-20;
    auto r = run_decoherence(c, strict).report;
    ASSERT_EQ(r["threshold"].get<double>(), 1e-20);
    ASSERT_TRUE(r["first_classical_t"].is_null());
    auto loose = run_decoherence(c).report;
    ASSERT_FALSE(loose["first_classical_t"].is_null());
    ASSERT_NEAR(loose["t_at_min_classicality"].get<double>(), 3.141592653589793, 1e-12);
}

TEST(demos, decoherence_sweep_csv) {
    auto result = run_decoherence(config(R"({"demo": "decoherence", "params": {"t_grid": [0, 1, 2]}})"));
    const auto &csv = result.artifacts[0];
    ASSERT_EQ(csv.filename, "decoherence_sweep.csv");
    std::istringstream in(csv.content);
    std::string line;
    std::getline(in, line);
    ASSERT_EQ(line, "t,zeta_0_1_abs,classicality");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    ASSERT_EQ(rows, 3);
}

TEST(demos, bad_params_are_rejected) {
    ASSERT_THROW(run_demo(config(R"({"demo": "steering", "params": {"colour": 1}})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "tomography"})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "infoloss"})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "decoherence", "params": {"t_grid": []}})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "decoherence", "params": {"t_grid": [1, 0]}})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "tomography", "seed": 1, "params": {"schedule": [400, 100]}})")),
                 ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "tomography", "seed": 1, "params": {"mode": "guess"}})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "tomography", "seed": 1, "params": {"d": 1}})")), ParseError);
    ASSERT_THROW(run_demo(config(R"({"demo": "decoherence", "params": {"random_environment": {}}})")), ParseError);
}

TEST(demos, write_artifacts_creates_files) {
    auto result = run_demo(config(R"({"demo": "steering"})"));
    auto dir = std::filesystem::temp_directory_path() / "qkin_demos_test";
    std::filesystem::remove_all(dir);
    auto paths = write_artifacts(result, dir / "nested");
    ASSERT_EQ(paths.size(), result.artifacts.size());
    std::ifstream in(paths[0], std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(content, result.artifacts[0].content);
    std::filesystem::remove_all(dir);
}

TEST(demos, format_number) {
    ASSERT_EQ(format_number(0.5), "0.5");
    ASSERT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
    ASSERT_EQ(format_number(-2), "-2");
}
