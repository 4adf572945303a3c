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

#include "aot/strategy.h"

#include <fmt/format.h>

#include <algorithm>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {
namespace {

struct StageName {
  Stage stage;
  const char* name;
};
constexpr StageName kStageNames[] = {
    {Stage::kCls1, "cls1"},         {Stage::kCls2, "cls2"},         {Stage::kIr, "ir"},
    {Stage::kPseudocode, "pseudocode"}, {Stage::kFinal, "final"},   {Stage::kBaseline, "baseline"},
    {Stage::kOneShot, "one_shot"},  {Stage::kCoT, "cot"},
};

struct StrategyName {
  Strategy strategy;
  const char* name;
};
constexpr StrategyName kStrategyNames[] = {
    {Strategy::kBaseline, "baseline"},
    {Strategy::kOneShot, "one_shot"},
    {Strategy::kCoTExplicit, "cot_explicit"},
    {Strategy::kCoTImplicitMultiModel, "cot_implicit"},
    {Strategy::kAoT, "aot"},
    {Strategy::kSoT, "sot"},
    {Strategy::kToT, "tot"},
};

}  // namespace

std::string_view ToString(Stage s) {
  for (const auto& e : kStageNames) {
    if (e.stage == s) return e.name;
  }
  return "?";
}

std::optional<Stage> ParseStage(std::string_view s) {
  std::string lower = ToLower(Trim(s));
  for (const auto& e : kStageNames) {
    if (lower == e.name) return e.stage;
  }
  return std::nullopt;
}

std::string_view ToString(Strategy s) {
  for (const auto& e : kStrategyNames) {
    if (e.strategy == s) return e.name;
  }
  return "?";
}

std::optional<Strategy> ParseStrategy(std::string_view s) {
  std::string lower = ToLower(Trim(s));
  std::replace(lower.begin(), lower.end(), '-', '_');
  if (lower == "oneshot" || lower == "1shot" || lower == "1_shot") return Strategy::kOneShot;
  if (lower == "cot") return Strategy::kCoTExplicit;
  if (lower == "cot_implicit_multi_model") return Strategy::kCoTImplicitMultiModel;
  for (const auto& e : kStrategyNames) {
    if (lower == e.name) return e.strategy;
  }
  return std::nullopt;
}

std::string FormatStageSet(const StageSet& stages) {
  std::vector<std::string> parts;
  if (stages.contains(AotStage::kBase)) parts.emplace_back("base");
  if (stages.contains(AotStage::kIr)) parts.emplace_back("ir");
  if (stages.contains(AotStage::kPseudocode)) parts.emplace_back("pseudo");
  return Join(parts, "+");
}

StageSet ParseStageSet(std::string_view text) {
  std::string normalized = ToLower(Trim(text));
  if (normalized == "full" || normalized == "all") return FullStageSet();
  std::replace(normalized.begin(), normalized.end(), ',', '+');
  StageSet stages;
  std::vector<std::string> problems;
  std::size_t start = 0;
  while (start <= normalized.size()) {
    std::size_t end = normalized.find('+', start);
    if (end == std::string::npos) end = normalized.size();
    std::string member(Trim(std::string_view(normalized).substr(start, end - start)));
    if (member == "base") {
      stages.insert(AotStage::kBase);
    } else if (member == "ir") {
      stages.insert(AotStage::kIr);
    } else if (member == "pseudo" || member == "pseudocode") {
      stages.insert(AotStage::kPseudocode);
    } else if (!member.empty()) {
      problems.push_back(fmt::format("stages: unknown stage `{}`", member));
    }
    start = end + 1;
  }
  if (stages.empty() && problems.empty()) problems.emplace_back("stages: empty stage set");
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return stages;
}

StageSet FullStageSet() { return {AotStage::kBase, AotStage::kIr, AotStage::kPseudocode}; }

const std::vector<StageSet>& AblationStageSets() {
  static const std::vector<StageSet> kSets = {
      {AotStage::kBase},
      {AotStage::kPseudocode},
      {AotStage::kBase, AotStage::kPseudocode},
      {AotStage::kIr},
      {AotStage::kBase, AotStage::kIr},
      {AotStage::kBase, AotStage::kIr, AotStage::kPseudocode},
  };
  return kSets;
}

bool IsAbstractionStage(Stage s) {
  switch (s) {
    case Stage::kCls1:
    case Stage::kCls2:
    case Stage::kIr:
    case Stage::kPseudocode:
    case Stage::kCoT:
      return true;
    default:
      return false;
  }
}

void StrategyConfig::Validate() const {
  if (strategy == Strategy::kSoT || strategy == Strategy::kToT) {
    throw UnsupportedStrategyError(
        fmt::format("strategy `{}` is not implemented by this harness", ToString(strategy)));
  }
  std::vector<std::string> problems;
  if (strategy == Strategy::kAoT && aot_stages.empty()) problems.emplace_back("strategy.stages: empty stage set");
  if (translation_model.empty()) problems.emplace_back("models.translation: no model id");
  if (abstraction_model.empty()) problems.emplace_back("models.abstraction: no model id");
  if (samples_per_problem < 1) problems.push_back(fmt::format("sampling.n: {} < 1", samples_per_problem));
  if (runs < 1) problems.push_back(fmt::format("sampling.runs: {} < 1", runs));
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    problems.push_back(fmt::format("sampling.temperature: {} outside [0, 2]", temperature));
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) problems.push_back(fmt::format("sampling.top_p: {} outside (0, 1]", top_p));
  if (top_k && *top_k < 1) problems.push_back(fmt::format("sampling.top_k: {} < 1", *top_k));
  if (max_output_tokens && *max_output_tokens < 1) {
    problems.push_back(fmt::format("sampling.max_output_tokens: {} < 1", *max_output_tokens));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

nlohmann::json StrategyConfig::ToJson() const {
  nlohmann::json j = {
      {"strategy", ToString(strategy)},
      {"abstraction_model", abstraction_model},
      {"translation_model", translation_model},
      {"n", samples_per_problem},
      {"runs", runs},
      {"temperature", temperature},
      {"top_p", top_p},
  };
  if (strategy == Strategy::kAoT) j["stages"] = FormatStageSet(aot_stages);
  j["top_k"] = top_k ? nlohmann::json(*top_k) : nlohmann::json(nullptr);
  j["max_output_tokens"] = max_output_tokens ? nlohmann::json(*max_output_tokens) : nlohmann::json(nullptr);
  return j;
}

StageRouting StageRouting::From(const StrategyConfig& config) {
  StageRouting routing;
  for (const auto& e : kStageNames) {
    routing.models[e.stage] = IsAbstractionStage(e.stage) ? config.abstraction_model : config.translation_model;
  }
  // Single-prompt strategies run entirely on the translation model.
  if (config.strategy == Strategy::kCoTExplicit) routing.models[Stage::kCoT] = config.translation_model;
  return routing;
}

const std::string& StageRouting::ModelFor(Stage stage) const {
  auto it = models.find(stage);
  if (it == models.end() || it->second.empty()) {
    throw PreconditionError(fmt::format("no model routed for stage `{}`", ToString(stage)));
  }
  return it->second;
}

}  // namespace aot
