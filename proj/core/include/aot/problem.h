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

// Benchmark problems and the classification vocabulary shared by every stage.

#ifndef AOT_PROBLEM_H_
#define AOT_PROBLEM_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aot {

// One benchmark item. `description` is the natural-language prose;
// `module_header` is the module declaration the model has to complete.
struct DesignProblem {
  std::string task_id;
  std::string description;
  std::string module_header;
  std::string testbench;
  std::optional<std::string> canonical_solution;
  // Unknown fields from the problem and description records, kept verbatim.
  nlohmann::json extra_problem_fields = nlohmann::json::object();
  nlohmann::json extra_description_fields = nlohmann::json::object();

  bool operator==(const DesignProblem&) const = default;
};

enum class Classification1 { kCombinational, kSequential };

enum class Classification2 {
  kTruthTable,
  kBooleanExpression,
  kKMap,
  kMuxMapping,
  kFsmImplied,
  kOther,
};

std::string_view ToString(Classification1 c);
std::string_view ToString(Classification2 c);
std::optional<Classification1> ParseClassification1(std::string_view word);
// Accepts the canonical terms plus common spellings ("k-map", "kmap",
// "mux", "truth table", ...).
std::optional<Classification2> ParseClassification2(std::string_view word);

// Vocabulary handed to the final-word extractor for each classification stage.
const std::vector<std::string>& Classification1Vocabulary();
const std::vector<std::string>& Classification2Vocabulary();

// Throws PreconditionError when the pair breaks the FsmImplied/Other rules.
void CheckClassificationPair(Classification1 c1, Classification2 c2);

// Non-fatal notes collected while loading or parsing.
struct Diagnostics {
  std::vector<std::string> warnings;
  void Warn(std::string message) { warnings.push_back(std::move(message)); }
};

struct ProblemLoadOptions {
  // Generation needs a description per task; simulating canonical
  // solutions does not.
  bool require_descriptions = true;
};

// Reads a line-delimited problem file (task_id, prompt, test,
// canonical_solution) and an optional description file (task_id,
// detail_description). Input order is preserved.
std::vector<DesignProblem> LoadProblems(
    const std::filesystem::path& problem_file,
    const std::optional<std::filesystem::path>& description_file = std::nullopt,
    Diagnostics* diagnostics = nullptr, const ProblemLoadOptions& options = {});

// Same as LoadProblems but over in-memory contents; `*_name` only labels
// error messages.
std::vector<DesignProblem> ParseProblems(
    std::string_view problem_text, std::optional<std::string_view> description_text,
    Diagnostics* diagnostics = nullptr, std::string_view problem_name = "<problems>",
    std::string_view description_name = "<descriptions>", const ProblemLoadOptions& options = {});

// Serializes back to the two-file ingestion layout.
std::string SerializeProblems(const std::vector<DesignProblem>& problems);
std::string SerializeDescriptions(const std::vector<DesignProblem>& problems);

void ValidateProblem(const DesignProblem& problem);

}  // namespace aot

#endif  // AOT_PROBLEM_H_
