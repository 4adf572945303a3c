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

// Prompt rendering for every pipeline stage and comparison strategy.

#ifndef AOT_TEMPLATES_H_
#define AOT_TEMPLATES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aot/ir.h"
#include "aot/problem.h"
#include "aot/strategy.h"
#include "aot/trace.h"

namespace aot {

struct RenderedPrompt {
  Stage stage = Stage::kFinal;
  std::string text;
  // Placeholder name -> where its value came from.
  std::map<std::string, std::string> placeholders_filled;
};

// Named template texts. The built-in set is compiled from core/templates.
class TemplateLibrary {
 public:
  static const TemplateLibrary& BuiltIn();
  // Built-in set with any `<name>.txt` found in `dir` replacing its entry.
  static TemplateLibrary WithOverrides(const std::filesystem::path& dir);

  // Throws PreconditionError for an unknown name.
  const std::string& Get(std::string_view name) const;
  std::vector<std::string> Names() const;
  // Placeholder names used by a template, in order of first use.
  std::vector<std::string> Placeholders(std::string_view name) const;

  // Single-pass substitution of `{{key}}` markers. Throws PreconditionError
  // when a marker has no value; unused values are ignored.
  std::string Fill(std::string_view name, const std::map<std::string, std::string>& values) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

// Description followed by the module header: the base prompt.
std::string ProblemText(const DesignProblem& problem);
// "sequential (fsm)", "combinational (truth_table)", "combinational".
std::string ClassificationText(std::optional<Classification1> c1, std::optional<Classification2> c2);
// Name of the IR template for `c2`; throws PreconditionError for kOther.
std::string IrTemplateName(Classification2 c2);

RenderedPrompt RenderCls1(const DesignProblem& problem,
                          const TemplateLibrary& library = TemplateLibrary::BuiltIn());
// Absent for sequential designs: the FSM representation is implied.
std::optional<RenderedPrompt> RenderCls2(const DesignProblem& problem, Classification1 c1,
                                         const TemplateLibrary& library = TemplateLibrary::BuiltIn());
RenderedPrompt RenderIr(const DesignProblem& problem, Classification1 c1, Classification2 c2,
                        const TemplateLibrary& library = TemplateLibrary::BuiltIn());
RenderedPrompt RenderPseudocode(const DesignProblem& problem, std::optional<Classification1> c1,
                                std::optional<Classification2> c2, const ir::IntermediateRep* ir,
                                const TemplateLibrary& library = TemplateLibrary::BuiltIn());
// Final translation prompt over `stages`. The classification block belongs
// to the IR layer; when c2 is `other` the IR layer carries the
// classification only. Throws CompositionError naming the stage whose
// artifact is missing.
RenderedPrompt RenderFinal(const DesignProblem& problem, const AbstractionTrace& trace, const StageSet& stages,
                           const TemplateLibrary& library = TemplateLibrary::BuiltIn());
// Baseline, OneShot, CoTExplicit, or the reasoning prompt of
// CoTImplicitMultiModel. Throws UnsupportedStrategyError otherwise.
RenderedPrompt RenderComparison(const DesignProblem& problem, Strategy strategy,
                                const TemplateLibrary& library = TemplateLibrary::BuiltIn());
// Translation prompt of CoTImplicitMultiModel: baseline plus reasoning.
RenderedPrompt RenderCoTFinal(const DesignProblem& problem, std::string_view reasoning,
                              const TemplateLibrary& library = TemplateLibrary::BuiltIn());
// `prompt` with the corrective note used for the single re-prompt.
RenderedPrompt WithRepromptNote(const RenderedPrompt& prompt, std::string_view reason,
                                const TemplateLibrary& library = TemplateLibrary::BuiltIn());

}  // namespace aot

#endif  // AOT_TEMPLATES_H_
