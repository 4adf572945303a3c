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

// Experiment manifest: one JSON file with sections problems, models,
// strategy, sampling, simulator, ir and output. Any leaf can be overridden
// by its dotted name, e.g. `sampling.n=3`.

#ifndef AOT_CONFIG_H_
#define AOT_CONFIG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aot/eval.h"
#include "aot/ir.h"
#include "aot/llm.h"
#include "aot/strategy.h"

namespace aot {

struct ProviderConfig {
  std::string type = "openai";
  std::string base_url = "https://api.openai.com/v1";
  // Name of the environment variable holding the key. Keys themselves are
  // never read from the config file.
  std::string api_key_env = "OPENAI_API_KEY";
  std::string provider_model;
  int max_concurrency = 4;
  int timeout_seconds = 120;
};

struct ExperimentConfig {
  std::filesystem::path problem_file;
  std::optional<std::filesystem::path> description_file;
  StrategyConfig strategy;
  std::vector<int> ks = {1};
  std::map<std::string, ProviderConfig> providers;
  // Scripted backend serving every model.
  std::optional<std::filesystem::path> mock_script;
  std::optional<std::filesystem::path> cache_dir;
  RetryPolicy retry;
  bool evaluate = true;
  SimulatorConfig simulator = SimulatorConfig::Icarus();
  std::filesystem::path out_dir = "aot-out";
  int workers = 1;
  ir::ParseOptions ir_options;
  std::optional<std::filesystem::path> templates_dir;
  // Effective configuration after defaults and overrides.
  nlohmann::json effective = nlohmann::json::object();
};

// Every recognised key with its default value.
nlohmann::json DefaultConfigJson();

// Sets the dotted `key` to `value`. The value is parsed as JSON when it
// is valid JSON and taken as a string otherwise.
void ApplyOverride(nlohmann::json& config, const std::string& key, const std::string& value);

// Throws ConfigError listing every offending key. Relative paths in the
// problems section, mock script and templates directory resolve against
// `base_dir`.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& config, const std::filesystem::path& base_dir = ".");

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Backends for every model used by `config.strategy`: the mock when a
// script is set, otherwise the configured providers, each wrapped with
// retries, the concurrency limit and the optional cache.
std::shared_ptr<BackendRegistry> BuildBackends(const ExperimentConfig& config);

}  // namespace aot

#endif  // AOT_CONFIG_H_
