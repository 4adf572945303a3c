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

#include "aot/problem.h"

#include <fmt/format.h>

#include <map>
#include <set>
#include <unordered_map>

#include "aot/errors.h"
#include "aot/strings.h"
#include "aot/verilog_module.h"

namespace aot {
namespace {

using nlohmann::json;

std::string RequireString(const json& record, const char* key, std::string_view file,
                          std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw ParseError(std::string(file), line, fmt::format("missing field `{}`", key));
  }
  if (!it->is_string()) {
    throw ParseError(std::string(file), line, fmt::format("field `{}` is not a string", key));
  }
  return it->get<std::string>();
}

json ExtraFields(const json& record, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (auto it = record.begin(); it != record.end(); ++it) {
    bool is_known = false;
    for (const char* k : known) is_known |= it.key() == k;
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

// Calls `fn(record, line_number)` for each non-blank line.
template <typename Fn>
void ForEachRecord(std::string_view text, std::string_view name, Fn&& fn) {
  std::size_t line_no = 0;
  for (auto line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string(name), line_no, fmt::format("malformed JSON: {}", e.what()));
    }
    if (!record.is_object()) {
      throw ParseError(std::string(name), line_no, "record is not a JSON object");
    }
    fn(record, line_no);
  }
}

}  // namespace

std::string_view ToString(Classification1 c) {
  return c == Classification1::kCombinational ? "combinational" : "sequential";
}

std::string_view ToString(Classification2 c) {
  switch (c) {
    case Classification2::kTruthTable:
      return "truth_table";
    case Classification2::kBooleanExpression:
      return "boolean_expression";
    case Classification2::kKMap:
      return "k-map";
    case Classification2::kMuxMapping:
      return "mux_mapping";
    case Classification2::kFsmImplied:
      return "fsm";
    case Classification2::kOther:
      return "other";
  }
  return "other";
}

std::optional<Classification1> ParseClassification1(std::string_view word) {
  std::string w = ToLower(Trim(word));
  if (w == "combinational") return Classification1::kCombinational;
  if (w == "sequential") return Classification1::kSequential;
  return std::nullopt;
}

std::optional<Classification2> ParseClassification2(std::string_view word) {
  static const std::map<std::string, Classification2> kAliases = {
      {"truth_table", Classification2::kTruthTable},
      {"truth table", Classification2::kTruthTable},
      {"truth-table", Classification2::kTruthTable},
      {"boolean_expression", Classification2::kBooleanExpression},
      {"boolean expression", Classification2::kBooleanExpression},
      {"boolean-expression", Classification2::kBooleanExpression},
      {"k-map", Classification2::kKMap},
      {"kmap", Classification2::kKMap},
      {"k_map", Classification2::kKMap},
      {"karnaugh-map", Classification2::kKMap},
      {"karnaugh map", Classification2::kKMap},
      {"mux_mapping", Classification2::kMuxMapping},
      {"mux", Classification2::kMuxMapping},
      {"mux mapping", Classification2::kMuxMapping},
      {"fsm", Classification2::kFsmImplied},
      {"other", Classification2::kOther},
  };
  auto it = kAliases.find(ToLower(Trim(word)));
  if (it == kAliases.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& Classification1Vocabulary() {
  static const std::vector<std::string> kVocab = {"combinational", "sequential"};
  return kVocab;
}

const std::vector<std::string>& Classification2Vocabulary() {
  static const std::vector<std::string> kVocab = {
      "truth_table", "truth table",   "boolean_expression", "boolean expression",
      "k-map",       "kmap",          "karnaugh-map",       "karnaugh map",
      "mux_mapping", "mux mapping",   "mux",                "other",
  };
  return kVocab;
}

void CheckClassificationPair(Classification1 c1, Classification2 c2) {
  bool sequential = c1 == Classification1::kSequential;
  if (sequential != (c2 == Classification2::kFsmImplied)) {
    throw PreconditionError(fmt::format("classification `{}` is inconsistent with `{}`",
                                        ToString(c2), ToString(c1)));
  }
}

void ValidateProblem(const DesignProblem& problem) {
  if (problem.task_id.empty()) throw PreconditionError("task_id is empty");
  if (problem.module_header.find("module") == std::string::npos) {
    throw PreconditionError(
        fmt::format("{}: module header does not contain `module`", problem.task_id));
  }
  try {
    ParseModuleHeader(problem.module_header);
  } catch (const PreconditionError& e) {
    throw PreconditionError(fmt::format("{}: {}", problem.task_id, e.what()));
  }
}

std::vector<DesignProblem> ParseProblems(std::string_view problem_text,
                                         std::optional<std::string_view> description_text,
                                         Diagnostics* diagnostics,
                                         std::string_view problem_name,
                                         std::string_view description_name,
                                         const ProblemLoadOptions& options) {
  std::vector<DesignProblem> problems;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Violation> violations;

  ForEachRecord(problem_text, problem_name, [&](const json& record, std::size_t line) {
    DesignProblem p;
    p.task_id = RequireString(record, "task_id", problem_name, line);
    p.module_header = RequireString(record, "prompt", problem_name, line);
    p.testbench = RequireString(record, "test", problem_name, line);
    if (auto it = record.find("canonical_solution"); it != record.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw ParseError(std::string(problem_name), line, "field `canonical_solution` is not a string");
      }
      p.canonical_solution = it->get<std::string>();
    }
    // Inline descriptions are accepted when no separate file is given.
    if (auto it = record.find("detail_description"); it != record.end() && it->is_string()) {
      p.description = it->get<std::string>();
    }
    p.extra_problem_fields =
        ExtraFields(record, {"task_id", "prompt", "test", "canonical_solution", "detail_description"});
    if (p.task_id.empty()) {
      throw ParseError(std::string(problem_name), line, "empty task_id");
    }
    if (index.contains(p.task_id)) {
      violations.push_back({"duplicate_task_id",
                            fmt::format("task_id `{}` appears more than once (line {})", p.task_id, line)});
      return;
    }
    index.emplace(p.task_id, problems.size());
    problems.push_back(std::move(p));
  });
  if (!violations.empty()) throw ValidationError(std::move(violations));

  if (description_text) {
    std::set<std::string> seen;
    ForEachRecord(*description_text, description_name, [&](const json& record, std::size_t line) {
      std::string id = RequireString(record, "task_id", description_name, line);
      std::string text = RequireString(record, "detail_description", description_name, line);
      auto it = index.find(id);
      if (it == index.end()) {
        if (diagnostics) {
          diagnostics->Warn(fmt::format("{}:{}: description for unknown task `{}` skipped",
                                        description_name, line, id));
        }
        return;
      }
      if (!seen.insert(id).second) {
        violations.push_back({"duplicate_description",
                              fmt::format("task `{}` has more than one description", id)});
        return;
      }
      auto& problem = problems[it->second];
      problem.description = std::move(text);
      problem.extra_description_fields = ExtraFields(record, {"task_id", "detail_description"});
    });
  }

  for (const auto& p : problems) {
    if (options.require_descriptions && Trim(p.description).empty()) {
      violations.push_back({"missing_description", fmt::format("task `{}` has no description", p.task_id)});
      continue;
    }
    try {
      ValidateProblem(p);
    } catch (const PreconditionError& e) {
      violations.push_back({"invalid_module_header", e.what()});
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return problems;
}

std::vector<DesignProblem> LoadProblems(const std::filesystem::path& problem_file,
                                        const std::optional<std::filesystem::path>& description_file,
                                        Diagnostics* diagnostics, const ProblemLoadOptions& options) {
  std::string problems = ReadFile(problem_file.string());
  std::optional<std::string> descriptions;
  if (description_file) descriptions = ReadFile(description_file->string());
  return ParseProblems(problems,
                       descriptions ? std::optional<std::string_view>(*descriptions) : std::nullopt,
                       diagnostics, problem_file.string(),
                       description_file ? description_file->string() : std::string("<none>"), options);
}

std::string SerializeProblems(const std::vector<DesignProblem>& problems) {
  std::string out;
  for (const auto& p : problems) {
    json record = p.extra_problem_fields.is_object() ? p.extra_problem_fields : json::object();
    record["task_id"] = p.task_id;
    record["prompt"] = p.module_header;
    record["test"] = p.testbench;
    if (p.canonical_solution) record["canonical_solution"] = *p.canonical_solution;
    out += record.dump() + "\n";
  }
  return out;
}

std::string SerializeDescriptions(const std::vector<DesignProblem>& problems) {
  std::string out;
  for (const auto& p : problems) {
    json record = p.extra_description_fields.is_object() ? p.extra_description_fields : json::object();
    record["task_id"] = p.task_id;
    record["detail_description"] = p.description;
    out += record.dump() + "\n";
  }
  return out;
}

}  // namespace aot
