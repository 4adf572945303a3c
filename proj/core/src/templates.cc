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

#include "aot/templates.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {
namespace detail {
const std::map<std::string, std::string>& EmbeddedTemplates();
}  // namespace detail

namespace {

// Asset files end with a newline that is not part of the template.
std::string StripFinalNewline(std::string text) {
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return text;
}

// Calls `on_text(literal)` and `on_key(name)` for each piece of `text`.
template <typename TextFn, typename KeyFn>
void Scan(std::string_view text, TextFn&& on_text, KeyFn&& on_key) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    std::string_view key = text.substr(open + 2, close - open - 2);
    bool ident = !key.empty();
    for (char c : key) ident &= std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    if (!ident) {
      on_text(text.substr(pos, open + 2 - pos));
      pos = open + 2;
      continue;
    }
    on_text(text.substr(pos, open - pos));
    on_key(std::string(key));
    pos = close + 2;
  }
  on_text(text.substr(pos));
}

RenderedPrompt Make(Stage stage, std::string text, std::map<std::string, std::string> filled) {
  RenderedPrompt p;
  p.stage = stage;
  p.text = std::move(text);
  p.placeholders_filled = std::move(filled);
  return p;
}

void RequireDescription(const DesignProblem& problem) {
  if (Trim(problem.description).empty()) {
    throw PreconditionError(fmt::format("task `{}` has an empty description", problem.task_id));
  }
}

}  // namespace

const TemplateLibrary& TemplateLibrary::BuiltIn() {
  static const TemplateLibrary kLibrary = [] {
    TemplateLibrary lib;
    for (const auto& [name, text] : detail::EmbeddedTemplates()) lib.templates_[name] = StripFinalNewline(text);
    return lib;
  }();
  return kLibrary;
}

TemplateLibrary TemplateLibrary::WithOverrides(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw PreconditionError(fmt::format("template directory `{}` does not exist", dir.string()));
  }
  TemplateLibrary lib = BuiltIn();
  for (auto& [name, text] : lib.templates_) {
    auto file = dir / (name + ".txt");
    if (std::filesystem::exists(file)) text = StripFinalNewline(ReadFile(file.string()));
  }
  return lib;
}

const std::string& TemplateLibrary::Get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw PreconditionError(fmt::format("unknown template `{}`", name));
  return it->second;
}

std::vector<std::string> TemplateLibrary::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, text] : templates_) names.push_back(name);
  return names;
}

std::vector<std::string> TemplateLibrary::Placeholders(std::string_view name) const {
  std::vector<std::string> keys;
  Scan(Get(name), [](std::string_view) {},
       [&](const std::string& key) {
         if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
       });
  return keys;
}

std::string TemplateLibrary::Fill(std::string_view name, const std::map<std::string, std::string>& values) const {
  std::string out;
  Scan(
      Get(name), [&](std::string_view text) { out += text; },
      [&](const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) {
          throw PreconditionError(fmt::format("template `{}`: no value for placeholder `{}`", name, key));
        }
        out += it->second;
      });
  return out;
}

std::string ProblemText(const DesignProblem& problem) {
  return fmt::format("{}\n\n{}", Trim(problem.description), Trim(problem.module_header));
}

std::string ClassificationText(std::optional<Classification1> c1, std::optional<Classification2> c2) {
  if (!c1) return "";
  std::string text(ToString(*c1));
  if (c2) text += fmt::format(" ({})", ToString(*c2));
  return text;
}

std::string IrTemplateName(Classification2 c2) {
  switch (c2) {
    case Classification2::kFsmImplied:
      return "ir_fsm";
    case Classification2::kTruthTable:
      return "ir_truth_table";
    case Classification2::kBooleanExpression:
      return "ir_boolean_expression";
    case Classification2::kKMap:
      return "ir_kmap";
    case Classification2::kMuxMapping:
      return "ir_mux_mapping";
    case Classification2::kOther:
      break;
  }
  throw PreconditionError("classification `other` has no IR template");
}

RenderedPrompt RenderCls1(const DesignProblem& problem, const TemplateLibrary& library) {
  RequireDescription(problem);
  return Make(Stage::kCls1, library.Fill("cls1", {{"problem", ProblemText(problem)}}),
              {{"problem", problem.task_id}});
}

std::optional<RenderedPrompt> RenderCls2(const DesignProblem& problem, Classification1 c1,
                                         const TemplateLibrary& library) {
  RequireDescription(problem);
  if (c1 == Classification1::kSequential) return std::nullopt;
  return Make(Stage::kCls2, library.Fill("cls2", {{"problem", ProblemText(problem)}}),
              {{"problem", problem.task_id}});
}

RenderedPrompt RenderIr(const DesignProblem& problem, Classification1 c1, Classification2 c2,
                        const TemplateLibrary& library) {
  RequireDescription(problem);
  if (c2 == Classification2::kOther) {
    throw PreconditionError("no IR is rendered for classification `other`");
  }
  CheckClassificationPair(c1, c2);
  std::string name = IrTemplateName(c2);
  return Make(Stage::kIr,
              library.Fill(name, {{"problem", ProblemText(problem)}, {"classification", ClassificationText(c1, c2)}}),
              {{"problem", problem.task_id}, {"classification", "c1+c2"}});
}

RenderedPrompt RenderPseudocode(const DesignProblem& problem, std::optional<Classification1> c1,
                                std::optional<Classification2> c2, const ir::IntermediateRep* ir,
                                const TemplateLibrary& library) {
  RequireDescription(problem);
  std::string abstractions;
  std::string sources;
  if (c1) {
    abstractions += "\n\n" + library.Fill("block_classification", {{"classification", ClassificationText(c1, c2)}});
    sources = c2 ? "c1+c2" : "c1";
  }
  if (ir) {
    abstractions += "\n\n" + library.Fill("block_ir", {{"ir_json", ir::Serialize(*ir)}});
    sources += sources.empty() ? "ir" : "+ir";
  }
  return Make(Stage::kPseudocode,
              library.Fill("pseudocode", {{"problem", ProblemText(problem)}, {"abstractions", abstractions}}),
              {{"problem", problem.task_id}, {"abstractions", sources.empty() ? "none" : sources}});
}

RenderedPrompt RenderFinal(const DesignProblem& problem, const AbstractionTrace& trace, const StageSet& stages,
                           const TemplateLibrary& library) {
  if (stages.empty()) throw CompositionError("stages", "empty stage set");
  std::vector<std::string> blocks;
  std::vector<std::string> sources;
  if (stages.contains(AotStage::kBase)) {
    RequireDescription(problem);
    blocks.push_back(ProblemText(problem));
    sources.emplace_back("base");
  }
  if (stages.contains(AotStage::kIr)) {
    if (!trace.c1) throw CompositionError("ir", "classification is absent from the trace");
    blocks.push_back(library.Fill("block_classification", {{"classification", ClassificationText(trace.c1, trace.c2)}}));
    sources.emplace_back("classification");
    if (trace.c2 != Classification2::kOther) {
      if (!trace.ir) throw CompositionError("ir", "intermediate representation is absent from the trace");
      blocks.push_back(library.Fill("block_ir", {{"ir_json", ir::Serialize(*trace.ir)}}));
      sources.emplace_back("ir");
    }
  }
  if (stages.contains(AotStage::kPseudocode)) {
    if (!trace.pseudocode) throw CompositionError("pseudocode", "pseudocode is absent from the trace");
    blocks.push_back(library.Fill("block_pseudocode", {{"pseudocode", Join(*trace.pseudocode, "\n")}}));
    sources.emplace_back("pseudocode");
  }
  return Make(Stage::kFinal, library.Fill("final", {{"blocks", Join(blocks, "\n\n")}}),
              {{"blocks", Join(sources, "+")}});
}

RenderedPrompt RenderComparison(const DesignProblem& problem, Strategy strategy, const TemplateLibrary& library) {
  RequireDescription(problem);
  auto baseline = [&] { return RenderFinal(problem, AbstractionTrace{}, {AotStage::kBase}, library).text; };
  switch (strategy) {
    case Strategy::kBaseline:
      return Make(Stage::kBaseline, baseline(), {{"blocks", "base"}});
    case Strategy::kOneShot:
      return Make(Stage::kOneShot, library.Fill("one_shot", {{"baseline", baseline()}}), {{"baseline", problem.task_id}});
    case Strategy::kCoTExplicit:
      return Make(Stage::kCoT, library.Fill("cot_explicit", {{"baseline", baseline()}}),
                  {{"baseline", problem.task_id}});
    case Strategy::kCoTImplicitMultiModel:
      return Make(Stage::kCoT, library.Fill("cot_implicit", {{"problem", ProblemText(problem)}}),
                  {{"problem", problem.task_id}});
    default:
      throw UnsupportedStrategyError(
          fmt::format("strategy `{}` has no prompt in this harness", ToString(strategy)));
  }
}

RenderedPrompt RenderCoTFinal(const DesignProblem& problem, std::string_view reasoning,
                              const TemplateLibrary& library) {
  std::string baseline = RenderComparison(problem, Strategy::kBaseline, library).text;
  return Make(Stage::kFinal,
              library.Fill("cot_final", {{"baseline", baseline}, {"reasoning", std::string(Trim(reasoning))}}),
              {{"baseline", problem.task_id}, {"reasoning", "cot"}});
}

RenderedPrompt WithRepromptNote(const RenderedPrompt& prompt, std::string_view reason,
                                const TemplateLibrary& library) {
  RenderedPrompt out = prompt;
  out.text += library.Fill("reprompt_note", {{"reason", std::string(reason)}});
  out.placeholders_filled["reason"] = "reprompt";
  return out;
}

}  // namespace aot
