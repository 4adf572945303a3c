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

#include "aot/errors.h"

#include <fmt/format.h>

namespace aot {
namespace {

std::string JoinViolations(const std::vector<Violation>& violations) {
  std::string out = fmt::format("{} violation(s):", violations.size());
  for (const auto& v : violations) out += fmt::format("\n  [{}] {}", v.kind, v.message);
  return out;
}

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : Error(line ? fmt::format("{}:{}: {}", file, line, what) : fmt::format("{}: {}", file, what)),
      file_(std::move(file)),
      line_(line) {}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(JoinViolations(violations)), violations_(std::move(violations)) {}

bool ValidationError::Has(const std::string& kind) const {
  for (const auto& v : violations_) {
    if (v.kind == kind) return true;
  }
  return false;
}

SchemaError::SchemaError(std::string key, const std::string& what)
    : Error(fmt::format("schema error at `{}`: {}", key, what)), key_(std::move(key)) {}

CompositionError::CompositionError(std::string stage, const std::string& what)
    : Error(fmt::format("cannot compose final prompt, stage `{}`: {}", stage, what)),
      stage_(std::move(stage)) {}

ExtractionError::ExtractionError(const std::string& what, std::string raw)
    : Error(what), raw_(std::move(raw)) {}

ExpressionError::ExpressionError(std::size_t position, const std::string& what)
    : Error(fmt::format("expression error at offset {}: {}", position, what)),
      position_(position) {}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(JoinProblems(problems)), problems_(std::move(problems)) {}

}  // namespace aot
