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

// Typed intermediate representations of a circuit: FSM, truth table,
// Boolean equations, Karnaugh map and multiplexer mapping.
//
// JSON schemas (key names are part of the file format):
//
//   FSM        {"states": [..], "transitions": [{"from","to","cond"}],
//               "outputs": [{"state","signal","value"}]}
//   truth table{"inputs": [..], "output": "y", "rows": [{"in": [0,1], "out": [1]}]}
//   boolean    {"inputs": [..], "outputs": [..], "expressions": {"y": "a AND b"}}
//   K-map      {"row_vars": [..], "col_vars": [..], "cells": [[0,1,"X",..],..],
//               "output": "y" (optional)}
//   MUX        {"data_inputs": [..], "select": {"name": "sel", "width": 2},
//               "output": "out", "mapping": {"0": "a", "1": "b", "2": "1'b0"}}
//
// K-map rows and columns are laid out in Gray-code order over their
// variables, most significant variable first.

#ifndef AOT_IR_H_
#define AOT_IR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "aot/errors.h"
#include "aot/problem.h"

namespace aot::ir {

struct FsmTransition {
  std::string from;
  std::string to;
  std::string cond;
  bool operator==(const FsmTransition&) const = default;
};

struct FsmOutput {
  std::string state;
  std::string signal;
  std::int64_t value = 0;
  bool operator==(const FsmOutput&) const = default;
};

struct FsmIr {
  std::vector<std::string> states;
  std::vector<FsmTransition> transitions;
  std::vector<FsmOutput> outputs;
  bool operator==(const FsmIr&) const = default;
};

struct TruthTableRow {
  std::vector<int> in;
  std::vector<int> out;
  bool operator==(const TruthTableRow&) const = default;
};

struct TruthTableIr {
  std::vector<std::string> inputs;
  std::string output;
  std::vector<TruthTableRow> rows;
  bool operator==(const TruthTableIr&) const = default;
};

struct BooleanEqnsIr {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  // Ordered for deterministic serialization.
  std::map<std::string, std::string> expressions;
  bool operator==(const BooleanEqnsIr&) const = default;
};

enum class KMapCell { kZero, kOne, kDontCare };

struct KMapIr {
  std::vector<std::string> row_vars;
  std::vector<std::string> col_vars;
  // cells[row][col]
  std::vector<std::vector<KMapCell>> cells;
  std::optional<std::string> output;
  bool operator==(const KMapIr&) const = default;

  std::size_t VariableCount() const { return row_vars.size() + col_vars.size(); }
  // All variables, MSB first: row variables then column variables.
  std::vector<std::string> Variables() const;
  // Cell value for a full assignment; bit i of `minterm` is variable
  // (VariableCount() - 1 - i), i.e. MSB = first row variable.
  KMapCell CellForMinterm(std::uint32_t minterm) const;
};

// Target of a MUX select value: a data input name or a constant literal.
struct MuxTarget {
  std::string input;                   // empty when constant
  std::optional<std::string> constant;  // Verilog literal, e.g. "1'b0"
  bool operator==(const MuxTarget&) const = default;
};

struct MuxIr {
  std::vector<std::string> data_inputs;
  std::string select_name;
  int select_width = 1;
  std::string output;
  std::map<std::uint32_t, MuxTarget> mapping;
  bool operator==(const MuxIr&) const = default;
};

using IrBody = std::variant<FsmIr, TruthTableIr, BooleanEqnsIr, KMapIr, MuxIr>;

// A validated IR together with the classification that selected it.
struct IntermediateRep {
  Classification2 classification = Classification2::kFsmImplied;
  IrBody body;
  bool operator==(const IntermediateRep&) const = default;
};

// Which IR body a Classification2 selects. Throws PreconditionError for
// kOther.
std::size_t BodyIndexFor(Classification2 c);

struct ParseOptions {
  // Truth tables must list all 2^|inputs| rows.
  bool strict_truth_table = false;
};

// Maps raw JSON text onto the schema selected by `expected` and validates
// it. Throws SchemaError (missing key / wrong type), ValidationError (all
// invariant breaches at once) or PreconditionError (expected == kOther or
// raw is not JSON).
IntermediateRep ParseIr(std::string_view raw, Classification2 expected,
                        const ParseOptions& options = {}, Diagnostics* diagnostics = nullptr);
IntermediateRep ParseIr(const nlohmann::json& doc, Classification2 expected,
                        const ParseOptions& options = {}, Diagnostics* diagnostics = nullptr);

// Invariant checks on an already-built IR. Empty when valid.
std::vector<Violation> Validate(const IntermediateRep& ir, const ParseOptions& options = {},
                                Diagnostics* diagnostics = nullptr);

nlohmann::json ToJson(const IntermediateRep& ir);
// Pretty-printed JSON as embedded in prompts and written by the CLI.
std::string Serialize(const IntermediateRep& ir);

// Classification2 guessed from the keys present, for tools that receive a
// bare IR file. Throws SchemaError when nothing matches.
Classification2 DetectClassification(const nlohmann::json& doc);

std::string_view ToString(KMapCell cell);

}  // namespace aot::ir

#endif  // AOT_IR_H_
