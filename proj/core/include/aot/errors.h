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

#ifndef AOT_ERRORS_H_
#define AOT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aot {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A single invariant breach. `kind` is a stable machine-readable class name
// (e.g. "undeclared_state"), `message` is for humans.
struct Violation {
  std::string kind;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }
  bool Has(const std::string& kind) const;

 private:
  std::vector<Violation> violations_;
};

// Missing key or wrong JSON type while mapping a document onto a schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class CompositionError : public Error {
 public:
  CompositionError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class UnsupportedStrategyError : public Error {
 public:
  using Error::Error;
};

// Response text did not contain the requested artifact. The raw text is kept
// for the trace.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& what, std::string raw);
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Pseudocode that contains Verilog statements.
class LeakError : public ExtractionError {
 public:
  using ExtractionError::ExtractionError;
};

// Unbalanced module/endmodule.
class StructureError : public ExtractionError {
 public:
  using ExtractionError::ExtractionError;
};

class ExpressionError : public Error {
 public:
  ExpressionError(std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class LoweringError : public Error {
 public:
  using Error::Error;
};

// Missing simulator binaries and similar; aborts a whole evaluation.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace aot

#endif  // AOT_ERRORS_H_
