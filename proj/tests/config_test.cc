// Copyright 2026 The AoT Harness Authors
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

#include "aot/config.h"

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "aot/errors.h"
#include "test_support.h"

namespace aot {
namespace {

using nlohmann::json;

json Minimal() {
  return {{"problems", {{"problem_file", "problems.jsonl"}}},
          {"models", {{"translation", "gpt-4o"}, {"mock", "script.json"}}}};
}

// Problems of a ConfigError joined into one string for matching.
std::string ProblemsOf(const json& doc) {
  try {
    ParseExperimentConfig(doc, "/base");
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& p : e.problems()) all += p + "\n";
    return all;
  }
  return "";
}

TEST(ConfigTest, DefaultsFillUnsetKeys) {
  auto config = ParseExperimentConfig(Minimal(), "/base");
  EXPECT_EQ(config.problem_file, std::filesystem::path("/base/problems.jsonl"));
  EXPECT_EQ(*config.mock_script, std::filesystem::path("/base/script.json"));
  EXPECT_EQ(config.strategy.strategy, Strategy::kAoT);
  EXPECT_EQ(config.strategy.aot_stages, FullStageSet());
  // A single model id serves both roles.
  EXPECT_EQ(config.strategy.abstraction_model, "gpt-4o");
  EXPECT_EQ(config.strategy.translation_model, "gpt-4o");
  EXPECT_EQ(config.strategy.samples_per_problem, 5);
  EXPECT_EQ(config.strategy.runs, 5);
  EXPECT_DOUBLE_EQ(config.strategy.temperature, 0.6);
  EXPECT_DOUBLE_EQ(config.strategy.top_p, 0.99);
  EXPECT_EQ(config.ks, std::vector<int>{1});
  EXPECT_TRUE(config.evaluate);
  EXPECT_EQ(config.simulator.compile_command[0], "iverilog");
  EXPECT_EQ(config.effective["sampling"]["n"], 5);
  EXPECT_EQ(config.effective["output"]["dir"], "aot-out");
}

TEST(ConfigTest, DottedOverrides) {
  json doc = Minimal();
  ApplyOverride(doc, "sampling.n", "3");
  ApplyOverride(doc, "sampling.k", "[1,3]");
  ApplyOverride(doc, "strategy.stages", "ir");
  ApplyOverride(doc, "models.abstraction", "claude-3.5-sonnet");
  ApplyOverride(doc, "simulator.enabled", "false");
  EXPECT_EQ(doc["sampling"]["n"], 3);
  EXPECT_EQ(doc["strategy"]["stages"], "ir");
  auto config = ParseExperimentConfig(doc, "/base");
  EXPECT_EQ(config.strategy.samples_per_problem, 3);
  EXPECT_EQ(config.ks, (std::vector<int>{1, 3}));
  EXPECT_EQ(config.strategy.aot_stages, (StageSet{AotStage::kIr}));
  EXPECT_EQ(config.strategy.abstraction_model, "claude-3.5-sonnet");
  EXPECT_FALSE(config.evaluate);
  EXPECT_THROW(ApplyOverride(doc, "sampling..n", "1"), ConfigError);
  EXPECT_THROW(ApplyOverride(doc, "", "1"), ConfigError);
}

TEST(ConfigTest, ScalarKIsAccepted) {
  json doc = Minimal();
  doc["sampling"] = {{"k", 2}};
  EXPECT_EQ(ParseExperimentConfig(doc, "/base").ks, std::vector<int>{2});
}

TEST(ConfigTest, UnknownKeysAreReported) {
  json doc = Minimal();
  doc["sampling"] = {{"temprature", 0.2}};
  doc["extra"] = 1;
  auto problems = ProblemsOf(doc);
  EXPECT_NE(problems.find("sampling.temprature: unknown key"), std::string::npos) << problems;
  EXPECT_NE(problems.find("extra: unknown key"), std::string::npos) << problems;
}

TEST(ConfigTest, EveryProblemIsListed) {
  json doc = {{"sampling", {{"n", 2}, {"k", {5}}}}, {"strategy", {{"name", "guess"}}}};
  auto problems = ProblemsOf(doc);
  EXPECT_NE(problems.find("problems.problem_file: required"), std::string::npos) << problems;
  EXPECT_NE(problems.find("unknown strategy `guess`"), std::string::npos) << problems;
  EXPECT_NE(problems.find("sampling.k: 5 outside"), std::string::npos) << problems;
}

TEST(ConfigTest, ApiKeysAreRejected) {
  json doc = Minimal();
  doc["models"]["providers"] = {{"gpt-4o", {{"api_key", "sk-secret"}}}};
  auto problems = ProblemsOf(doc);
  EXPECT_NE(problems.find("API keys are not accepted"), std::string::npos) << problems;
  EXPECT_EQ(problems.find("sk-secret"), std::string::npos);
}

TEST(ConfigTest, ProvidersAreRequiredWithoutMock) {
  json doc = Minimal();
  doc["models"].erase("mock");
  EXPECT_NE(ProblemsOf(doc).find("no provider for model `gpt-4o`"), std::string::npos);
  doc["models"]["providers"] = {{"gpt-4o", {{"api_key_env", "MY_KEY"}, {"base_url", "http://localhost:1"}}}};
  auto config = ParseExperimentConfig(doc, "/base");
  EXPECT_EQ(config.providers.at("gpt-4o").api_key_env, "MY_KEY");
  EXPECT_EQ(config.providers.at("gpt-4o").max_concurrency, 4);
  doc["models"]["providers"]["gpt-4o"]["type"] = "carrier-pigeon";
  EXPECT_NE(ProblemsOf(doc).find("unsupported provider type"), std::string::npos);
}

TEST(ConfigTest, SimulatorSettings) {
  json doc = Minimal();
  doc["simulator"] = {{"mismatch_regex", "Mismatches: \\d+"}};
  EXPECT_NE(ProblemsOf(doc).find("capture group"), std::string::npos);
  doc["simulator"] = {{"mismatch_regex", "(unclosed"}};
  EXPECT_NE(ProblemsOf(doc).find("simulator.mismatch_regex"), std::string::npos);
  doc["simulator"] = {{"profile", "modelsim"}};
  EXPECT_NE(ProblemsOf(doc).find("unknown profile"), std::string::npos);

  doc["simulator"] = {{"profile", "verilator"}, {"wrapper", "/opt/vlsim"}};
  auto verilator = ParseExperimentConfig(doc, "/base").simulator;
  EXPECT_EQ(verilator.compile_command[0], "/opt/vlsim");
  EXPECT_EQ(verilator.check_command, (std::vector<std::string>{"/opt/vlsim", "check"}));
  doc["simulator"]["compile_command"] = {"my-compile", "{candidate}"};
  EXPECT_TRUE(ParseExperimentConfig(doc, "/base").simulator.check_command.empty());
}

TEST(ConfigTest, UnsupportedStrategiesFailAfterOtherChecks) {
  json doc = Minimal();
  doc["strategy"] = {{"name", "sot"}};
  EXPECT_THROW(ParseExperimentConfig(doc, "/base"), UnsupportedStrategyError);
  doc["strategy"] = {{"name", "tot"}};
  EXPECT_THROW(ParseExperimentConfig(doc, "/base"), UnsupportedStrategyError);
  doc["sampling"] = {{"n", 0}};
  EXPECT_THROW(ParseExperimentConfig(doc, "/base"), ConfigError);
}

TEST(ConfigTest, LoadResolvesAgainstTheFileAndAppliesOverrides) {
  auto path = testing::FixturePath("experiment.json");
  auto config = LoadExperimentConfig(path, {{"sampling.n", "4"}, {"sampling.k", "[2]"}});
  EXPECT_EQ(config.problem_file, path.parent_path() / "problems.jsonl");
  EXPECT_TRUE(std::filesystem::exists(config.problem_file));
  EXPECT_EQ(config.strategy.samples_per_problem, 4);
  EXPECT_EQ(config.ks, std::vector<int>{2});

  auto dir = testing::MakeTempDir("aot-config-test");
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_THROW(LoadExperimentConfig(dir / "broken.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(ConfigTest, BuildBackendsServesEveryModelFromTheMock) {
  auto config = LoadExperimentConfig(testing::FixturePath("experiment.json"));
  auto registry = BuildBackends(config);
  EXPECT_TRUE(registry->Has(config.strategy.abstraction_model));
  EXPECT_TRUE(registry->Has(config.strategy.translation_model));
  GenerationRequest request;
  request.model_id = config.strategy.abstraction_model;
  request.prompt = "classify";
  request.tag = {"count1to10", Stage::kCls1, 0, 0};
  auto result = registry->Get(request.model_id).Generate(request);
  EXPECT_NE(result.text.find("sequential"), std::string::npos);
}

TEST(ConfigTest, BuildBackendsRegistersProviders) {
  json doc = Minimal();
  doc["models"].erase("mock");
  doc["models"]["providers"] = {{"gpt-4o", {{"api_key_env", "AOT_TEST_UNSET_KEY"}}}};
  auto config = ParseExperimentConfig(doc, "/base");
  unsetenv("AOT_TEST_UNSET_KEY");
  EXPECT_THROW(BuildBackends(config), BackendError);
  setenv("AOT_TEST_UNSET_KEY", "test-key", 1);
  auto registry = BuildBackends(config);
  unsetenv("AOT_TEST_UNSET_KEY");
  EXPECT_TRUE(registry->Has("gpt-4o"));
  EXPECT_FALSE(registry->Has("other-model"));
}

}  // namespace
}  // namespace aot
