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

// Inference strategies, AoT stage sets and per-stage model routing.

#ifndef AOT_STRATEGY_H_
#define AOT_STRATEGY_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aot {

// Pipeline stage that issues one model request.
enum class Stage { kCls1, kCls2, kIr, kPseudocode, kFinal, kBaseline, kOneShot, kCoT };

// Stage-set members for AoT ablations.
enum class AotStage { kBase, kIr, kPseudocode };
using StageSet = std::set<AotStage>;

enum class Strategy { kBaseline, kOneShot, kCoTExplicit, kCoTImplicitMultiModel, kAoT, kSoT, kToT };

std::string_view ToString(Stage s);
std::optional<Stage> ParseStage(std::string_view s);
std::string_view ToString(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view s);

// "base+ir+pseudo" style names, members in Base, IR, Pseudocode order.
std::string FormatStageSet(const StageSet& stages);
// Accepts '+' or ',' separated members: base, ir, pseudo / pseudocode,
// or the alias "full". Throws ConfigError on unknown members or empty sets.
StageSet ParseStageSet(std::string_view text);
StageSet FullStageSet();

// The six ablation configurations in table order: Base, Pseudo,
// Base+Pseudo, IR, Base+IR, Base+IR+Pseudo.
const std::vector<StageSet>& AblationStageSets();

// True for stages served by the abstraction model.
bool IsAbstractionStage(Stage s);

struct StrategyConfig {
  Strategy strategy = Strategy::kAoT;
  StageSet aot_stages = FullStageSet();
  std::string abstraction_model;
  std::string translation_model;
  int samples_per_problem = 5;
  int runs = 5;
  double temperature = 0.6;
  double top_p = 0.99;
  std::optional<int> top_k;
  std::optional<int> max_output_tokens;

  // Throws ConfigError listing every problem. Throws
  // UnsupportedStrategyError for SoT and ToT.
  void Validate() const;
  nlohmann::json ToJson() const;
};

struct StageRouting {
  std::map<Stage, std::string> models;

  // Abstraction stages go to abstraction_model, translation stages to
  // translation_model.
  static StageRouting From(const StrategyConfig& config);
  // Throws PreconditionError for a stage with no route.
  const std::string& ModelFor(Stage stage) const;
};

}  // namespace aot

#endif  // AOT_STRATEGY_H_
