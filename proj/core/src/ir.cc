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

#include "aot/ir.h"

#include <fmt/format.h>

#include <regex>
#include <set>

#include "aot/bool_expr.h"
#include "aot/errors.h"
#include "aot/strings.h"

namespace aot::ir {
namespace {

using nlohmann::json;

constexpr int kMaxTruthTableInputs = 4;
constexpr int kMaxSelectWidth = 16;
constexpr std::size_t kMaxKMapVars = 8;

// A key that appeared twice inside the same JSON object.
struct DuplicateKey {
  std::string object;  // key naming the enclosing object ("" at top level)
  std::string key;
};

json ParseTracking(std::string_view raw, std::vector<DuplicateKey>& duplicates) {
  struct Frame {
    std::string name;
    std::set<std::string> keys;
  };
  std::vector<Frame> frames;
  std::string last_key;
  json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        frames.push_back({last_key, {}});
        break;
      case json::parse_event_t::object_end:
        if (!frames.empty()) frames.pop_back();
        break;
      case json::parse_event_t::key: {
        last_key = parsed.get<std::string>();
        if (!frames.empty() && !frames.back().keys.insert(last_key).second) {
          duplicates.push_back({frames.back().name, last_key});
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(raw.begin(), raw.end(), cb);
  } catch (const json::parse_error& e) {
    throw PreconditionError(fmt::format("IR is not valid JSON: {}", e.what()));
  }
}

const json& Require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + key, "missing required key");
  return *it;
}

std::string AsString(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, fmt::format("expected string, got {}", v.type_name()));
  return v.get<std::string>();
}

std::vector<std::string> AsStringList(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, fmt::format("expected array, got {}", v.type_name()));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(AsString(v[i], fmt::format("{}[{}]", path, i)));
  return out;
}

const json& AsArray(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, fmt::format("expected array, got {}", v.type_name()));
  return v;
}

const json& AsObject(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, fmt::format("expected object, got {}", v.type_name()));
  return v;
}

void WarnUnknown(const json& obj, std::initializer_list<const char*> known, const std::string& path,
                 Diagnostics* diagnostics) {
  if (!diagnostics || !obj.is_object()) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok |= it.key() == k;
    if (!ok) diagnostics->Warn(fmt::format("ignoring unknown key `{}{}`", path, it.key()));
  }
}

// Verilog-ish integer: 10, "10", "4'd10", "4'b1010", "8'hff".
std::optional<std::int64_t> ParseVerilogInt(std::string_view s) {
  static const std::regex kLiteral(R"(^\s*(\d+)?'([bBdDhHoO])([0-9a-fA-F_]+)\s*$)");
  static const std::regex kDecimal(R"(^\s*-?\d+\s*$)");
  std::string str(s);
  std::smatch m;
  try {
    if (std::regex_match(str, m, kDecimal)) return std::stoll(str);
    if (std::regex_match(str, m, kLiteral)) {
      std::string digits = m[3];
      std::erase(digits, '_');
      int base = 10;
      switch (std::tolower(static_cast<unsigned char>(m[2].str()[0]))) {
        case 'b':
          base = 2;
          break;
        case 'h':
          base = 16;
          break;
        case 'o':
          base = 8;
          break;
        default:
          base = 10;
      }
      return std::stoll(digits, nullptr, base);
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

bool IsVerilogConstant(std::string_view s) { return ParseVerilogInt(s).has_value(); }

std::int64_t AsInteger(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (v.is_string()) {
    if (auto parsed = ParseVerilogInt(v.get<std::string>())) return *parsed;
  }
  throw SchemaError(path, fmt::format("expected integer, got {}", v.dump()));
}

// Bit vectors: [0,1,1], "011", or a single 0/1.
std::vector<int> AsBits(const json& v, const std::string& path, std::vector<Violation>& violations) {
  std::vector<int> bits;
  auto push = [&](std::int64_t b, std::size_t i) {
    if (b != 0 && b != 1) {
      violations.push_back({"non_binary_value", fmt::format("{}[{}] = {} is not 0 or 1", path, i, b)});
    }
    bits.push_back(static_cast<int>(b));
  };
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) push(AsInteger(v[i], fmt::format("{}[{}]", path, i)), i);
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '_' || s[i] == ' ') continue;
      if (s[i] != '0' && s[i] != '1') {
        violations.push_back({"non_binary_value", fmt::format("{} contains `{}`", path, s[i])});
        bits.push_back(0);
      } else {
        bits.push_back(s[i] - '0');
      }
    }
  } else if (v.is_number_integer() || v.is_boolean()) {
    push(AsInteger(v, path), 0);
  } else {
    throw SchemaError(path, fmt::format("expected bit vector, got {}", v.type_name()));
  }
  return bits;
}

FsmIr ParseFsm(const json& doc, Diagnostics* diag) {
  WarnUnknown(doc, {"states", "transitions", "outputs"}, "", diag);
  FsmIr fsm;
  fsm.states = AsStringList(Require(doc, "states", ""), "states");
  const json& transitions = AsArray(Require(doc, "transitions", ""), "transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    std::string path = fmt::format("transitions[{}].", i);
    const json& t = AsObject(transitions[i], path);
    WarnUnknown(t, {"from", "to", "cond"}, path, diag);
    FsmTransition tr;
    tr.from = AsString(Require(t, "from", path), path + "from");
    tr.to = AsString(Require(t, "to", path), path + "to");
    tr.cond = AsString(Require(t, "cond", path), path + "cond");
    fsm.transitions.push_back(std::move(tr));
  }
  const json& outputs = AsArray(Require(doc, "outputs", ""), "outputs");
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    std::string path = fmt::format("outputs[{}].", i);
    const json& o = AsObject(outputs[i], path);
    WarnUnknown(o, {"state", "signal", "value"}, path, diag);
    FsmOutput out;
    out.state = AsString(Require(o, "state", path), path + "state");
    out.signal = AsString(Require(o, "signal", path), path + "signal");
    out.value = AsInteger(Require(o, "value", path), path + "value");
    fsm.outputs.push_back(std::move(out));
  }
  return fsm;
}

TruthTableIr ParseTruthTable(const json& doc, Diagnostics* diag, std::vector<Violation>& violations) {
  WarnUnknown(doc, {"inputs", "output", "rows"}, "", diag);
  TruthTableIr tt;
  tt.inputs = AsStringList(Require(doc, "inputs", ""), "inputs");
  tt.output = AsString(Require(doc, "output", ""), "output");
  const json& rows = AsArray(Require(doc, "rows", ""), "rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string path = fmt::format("rows[{}].", i);
    const json& r = AsObject(rows[i], path);
    WarnUnknown(r, {"in", "out"}, path, diag);
    TruthTableRow row;
    row.in = AsBits(Require(r, "in", path), path + "in", violations);
    row.out = AsBits(Require(r, "out", path), path + "out", violations);
    tt.rows.push_back(std::move(row));
  }
  return tt;
}

BooleanEqnsIr ParseBoolean(const json& doc, Diagnostics* diag) {
  WarnUnknown(doc, {"inputs", "outputs", "expressions"}, "", diag);
  BooleanEqnsIr b;
  b.inputs = AsStringList(Require(doc, "inputs", ""), "inputs");
  b.outputs = AsStringList(Require(doc, "outputs", ""), "outputs");
  const json& exprs = AsObject(Require(doc, "expressions", ""), "expressions");
  for (auto it = exprs.begin(); it != exprs.end(); ++it) {
    b.expressions[it.key()] = AsString(it.value(), "expressions." + it.key());
  }
  return b;
}

KMapIr ParseKMap(const json& doc, Diagnostics* diag, std::vector<Violation>& violations) {
  WarnUnknown(doc, {"row_vars", "col_vars", "cells", "output"}, "", diag);
  KMapIr k;
  k.row_vars = AsStringList(Require(doc, "row_vars", ""), "row_vars");
  k.col_vars = AsStringList(Require(doc, "col_vars", ""), "col_vars");
  if (auto it = doc.find("output"); it != doc.end()) k.output = AsString(*it, "output");
  const json& cells = AsArray(Require(doc, "cells", ""), "cells");
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const json& row = AsArray(cells[r], fmt::format("cells[{}]", r));
    std::vector<KMapCell> parsed;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const json& v = row[c];
      std::string text = v.is_string() ? ToLower(Trim(v.get<std::string>())) : v.dump();
      if (text == "0" || text == "false") {
        parsed.push_back(KMapCell::kZero);
      } else if (text == "1" || text == "true") {
        parsed.push_back(KMapCell::kOne);
      } else if (text == "x" || text == "-" || text == "d") {
        parsed.push_back(KMapCell::kDontCare);
      } else {
        violations.push_back({"kmap_cell_value",
                              fmt::format("cells[{}][{}] = {} is not 0, 1 or X", r, c, v.dump())});
        parsed.push_back(KMapCell::kZero);
      }
    }
    k.cells.push_back(std::move(parsed));
  }
  return k;
}

MuxTarget ParseMuxTarget(const json& v, const std::string& path) {
  if (v.is_number_integer() || v.is_boolean()) {
    return MuxTarget{"", std::to_string(AsInteger(v, path))};
  }
  std::string s = AsString(v, path);
  if (IsVerilogConstant(s)) return MuxTarget{"", std::string(Trim(s))};
  return MuxTarget{std::string(Trim(s)), std::nullopt};
}

MuxIr ParseMux(const json& doc, Diagnostics* diag, std::vector<Violation>& violations) {
  WarnUnknown(doc, {"data_inputs", "select", "output", "mapping"}, "", diag);
  MuxIr m;
  m.data_inputs = AsStringList(Require(doc, "data_inputs", ""), "data_inputs");
  const json& select = AsObject(Require(doc, "select", ""), "select");
  WarnUnknown(select, {"name", "width"}, "select.", diag);
  m.select_name = AsString(Require(select, "name", "select."), "select.name");
  m.select_width = static_cast<int>(AsInteger(Require(select, "width", "select."), "select.width"));
  m.output = AsString(Require(doc, "output", ""), "output");

  auto add = [&](std::string_view key_text, std::optional<std::int64_t> key, MuxTarget target,
                 const std::string& path) {
    if (!key || *key < 0) {
      violations.push_back({"mux_select_out_of_range",
                            fmt::format("{}: select value `{}` is not a non-negative integer", path, key_text)});
      return;
    }
    auto [it, inserted] = m.mapping.emplace(static_cast<std::uint32_t>(*key), std::move(target));
    if (!inserted) {
      violations.push_back({"mux_duplicate_select",
                            fmt::format("select value {} is mapped more than once", *key)});
    }
  };

  const json& mapping = Require(doc, "mapping", "");
  if (mapping.is_object()) {
    for (auto it = mapping.begin(); it != mapping.end(); ++it) {
      std::string path = "mapping." + it.key();
      add(it.key(), ParseVerilogInt(it.key()), ParseMuxTarget(it.value(), path), path);
    }
  } else if (mapping.is_array()) {
    for (std::size_t i = 0; i < mapping.size(); ++i) {
      std::string path = fmt::format("mapping[{}].", i);
      const json& e = AsObject(mapping[i], path);
      const json& sel = Require(e, "select", path);
      std::optional<std::int64_t> key =
          sel.is_string() ? ParseVerilogInt(sel.get<std::string>())
                          : std::optional<std::int64_t>(AsInteger(sel, path + "select"));
      add(sel.dump(), key, ParseMuxTarget(Require(e, "input", path), path + "input"), path);
    }
  } else {
    throw SchemaError("mapping", fmt::format("expected object or array, got {}", mapping.type_name()));
  }
  return m;
}

void CheckNames(const std::vector<std::string>& names, const char* what, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (Trim(n).empty()) out.push_back({"empty_name", fmt::format("{} contains an empty name", what)});
    if (!seen.insert(n).second) {
      out.push_back({"duplicate_name", fmt::format("{} lists `{}` more than once", what, n)});
    }
  }
}

void ValidateFsm(const FsmIr& fsm, std::vector<Violation>& out) {
  if (fsm.states.empty()) out.push_back({"empty_states", "FSM declares no states"});
  std::set<std::string> states;
  for (const auto& s : fsm.states) {
    if (!states.insert(s).second) {
      out.push_back({"duplicate_state", fmt::format("state `{}` is declared more than once", s)});
    }
  }
  for (std::size_t i = 0; i < fsm.transitions.size(); ++i) {
    const auto& t = fsm.transitions[i];
    for (const auto* name : {&t.from, &t.to}) {
      if (!states.contains(*name)) {
        out.push_back({"undeclared_state",
                       fmt::format("undeclared state {} in transitions[{}]", *name, i)});
      }
    }
    try {
      ParseGuard(t.cond);
    } catch (const ExpressionError& e) {
      out.push_back({"condition_syntax", fmt::format("transitions[{}].cond: {}", i, e.what())});
    }
  }
  std::set<std::pair<std::string, std::string>> assigned;
  for (std::size_t i = 0; i < fsm.outputs.size(); ++i) {
    const auto& o = fsm.outputs[i];
    if (!states.contains(o.state)) {
      out.push_back({"undeclared_state", fmt::format("undeclared state {} in outputs[{}]", o.state, i)});
    }
    if (o.value < 0) {
      out.push_back({"negative_output_value",
                     fmt::format("outputs[{}]: value {} is negative", i, o.value)});
    }
    if (!assigned.emplace(o.state, o.signal).second) {
      out.push_back({"duplicate_output",
                     fmt::format("signal `{}` is assigned twice in state {}", o.signal, o.state)});
    }
  }
}

void ValidateTruthTable(const TruthTableIr& tt, const ParseOptions& options, std::vector<Violation>& out,
                        Diagnostics* diag) {
  CheckNames(tt.inputs, "inputs", out);
  if (tt.inputs.empty()) out.push_back({"empty_inputs", "truth table declares no inputs"});
  if (static_cast<int>(tt.inputs.size()) > kMaxTruthTableInputs) {
    out.push_back({"too_many_inputs", fmt::format("truth table has {} inputs; at most {} allowed",
                                                  tt.inputs.size(), kMaxTruthTableInputs)});
  }
  if (Trim(tt.output).empty()) out.push_back({"empty_name", "truth table output name is empty"});
  std::set<std::vector<int>> seen;
  std::optional<std::size_t> out_width;
  for (std::size_t i = 0; i < tt.rows.size(); ++i) {
    const auto& row = tt.rows[i];
    if (row.in.size() != tt.inputs.size()) {
      out.push_back({"row_width_mismatch", fmt::format("rows[{}] has {} input bits, expected {}", i,
                                                       row.in.size(), tt.inputs.size())});
    }
    if (row.out.empty()) out.push_back({"row_width_mismatch", fmt::format("rows[{}] has no output bits", i)});
    if (!out_width) out_width = row.out.size();
    if (row.out.size() != *out_width) {
      out.push_back({"row_width_mismatch",
                     fmt::format("rows[{}] has {} output bits, rows[0] has {}", i, row.out.size(), *out_width)});
    }
    if (!seen.insert(row.in).second) {
      out.push_back({"duplicate_input_vector", fmt::format("rows[{}] repeats an input vector", i)});
    }
  }
  if (tt.inputs.size() <= 16) {
    std::size_t expected = std::size_t{1} << tt.inputs.size();
    if (seen.size() < expected) {
      std::string msg = fmt::format("truth table lists {} of {} input combinations", seen.size(), expected);
      if (options.strict_truth_table) {
        out.push_back({"incomplete_table", msg});
      } else if (diag) {
        diag->Warn(msg + "; missing rows read as 0");
      }
    }
  }
}

void ValidateBoolean(const BooleanEqnsIr& b, std::vector<Violation>& out) {
  CheckNames(b.inputs, "inputs", out);
  CheckNames(b.outputs, "outputs", out);
  if (b.outputs.empty()) out.push_back({"empty_outputs", "no outputs declared"});
  std::set<std::string> inputs(b.inputs.begin(), b.inputs.end());
  std::set<std::string> input_bases;
  for (const auto& in : b.inputs) input_bases.insert(BaseName(in));
  std::set<std::string> outputs(b.outputs.begin(), b.outputs.end());
  for (const auto& o : b.outputs) {
    if (!b.expressions.contains(o)) {
      out.push_back({"missing_expression", fmt::format("output `{}` has no expression", o)});
    }
  }
  for (const auto& [name, text] : b.expressions) {
    if (!outputs.contains(name)) {
      out.push_back({"undeclared_output", fmt::format("expression given for undeclared output `{}`", name)});
    }
    try {
      BoolExpr e = ParseBoolExpr(text);
      for (const auto& v : e.Variables()) {
        // "in[2]" is fine when "in" (the whole vector) is declared.
        if (!inputs.contains(v) && !(v.find('[') != std::string::npos && inputs.contains(BaseName(v)))) {
          out.push_back({"undeclared_input",
                         fmt::format("expression for `{}` references undeclared input `{}`", name, v)});
        }
      }
    } catch (const ExpressionError& e) {
      out.push_back({"expression_syntax", fmt::format("expression for `{}`: {}", name, e.what())});
    }
  }
}

void ValidateKMap(const KMapIr& k, std::vector<Violation>& out) {
  CheckNames(k.Variables(), "row_vars/col_vars", out);
  std::set<std::string> rows(k.row_vars.begin(), k.row_vars.end());
  for (const auto& c : k.col_vars) {
    if (rows.contains(c)) {
      out.push_back({"kmap_overlapping_vars", fmt::format("`{}` is both a row and a column variable", c)});
    }
  }
  if (k.VariableCount() == 0) out.push_back({"kmap_grid_size", "K-map has no variables"});
  if (k.VariableCount() > kMaxKMapVars) {
    out.push_back({"kmap_grid_size", fmt::format("K-map has {} variables; at most {} supported",
                                                 k.VariableCount(), kMaxKMapVars)});
    return;
  }
  std::size_t want_rows = std::size_t{1} << k.row_vars.size();
  std::size_t want_cols = std::size_t{1} << k.col_vars.size();
  if (k.cells.size() != want_rows) {
    out.push_back({"kmap_grid_size",
                   fmt::format("K-map has {} rows, expected {}", k.cells.size(), want_rows)});
  }
  for (std::size_t r = 0; r < k.cells.size(); ++r) {
    if (k.cells[r].size() != want_cols) {
      out.push_back({"kmap_grid_size", fmt::format("K-map row {} has {} cells, expected {}", r,
                                                   k.cells[r].size(), want_cols)});
    }
  }
}

void ValidateMux(const MuxIr& m, std::vector<Violation>& out) {
  CheckNames(m.data_inputs, "data_inputs", out);
  if (Trim(m.select_name).empty()) out.push_back({"empty_name", "select name is empty"});
  if (Trim(m.output).empty()) out.push_back({"empty_name", "output name is empty"});
  if (m.select_width < 1 || m.select_width > kMaxSelectWidth) {
    out.push_back({"mux_select_width",
                   fmt::format("select width {} outside [1, {}]", m.select_width, kMaxSelectWidth)});
  }
  if (m.mapping.empty()) out.push_back({"mux_empty_mapping", "MUX mapping is empty"});
  std::set<std::string> declared(m.data_inputs.begin(), m.data_inputs.end());
  for (const auto& [sel, target] : m.mapping) {
    if (m.select_width >= 1 && m.select_width <= kMaxSelectWidth &&
        sel >= (std::uint32_t{1} << m.select_width)) {
      out.push_back({"mux_select_out_of_range", fmt::format("select value {} does not fit in {} bit(s)",
                                                            sel, m.select_width)});
    }
    if (!target.constant && !declared.contains(target.input) &&
        !(target.input.find('[') != std::string::npos && declared.contains(BaseName(target.input)))) {
      out.push_back({"mux_undeclared_input",
                     fmt::format("select value {} maps to undeclared input `{}`", sel, target.input)});
    }
  }
}

KMapCell CellAt(const KMapIr& k, std::size_t r, std::size_t c) {
  if (r < k.cells.size() && c < k.cells[r].size()) return k.cells[r][c];
  return KMapCell::kZero;
}

std::uint32_t GrayIndex(std::uint32_t value) {
  // Position of `value` in the Gray sequence: inverse Gray code.
  std::uint32_t index = value;
  for (std::uint32_t shift = value >> 1; shift; shift >>= 1) index ^= shift;
  return index;
}

}  // namespace

std::vector<std::string> KMapIr::Variables() const {
  std::vector<std::string> all = row_vars;
  all.insert(all.end(), col_vars.begin(), col_vars.end());
  return all;
}

KMapCell KMapIr::CellForMinterm(std::uint32_t minterm) const {
  std::uint32_t col_bits = static_cast<std::uint32_t>(col_vars.size());
  std::uint32_t col_value = minterm & ((1u << col_bits) - 1u);
  std::uint32_t row_value = minterm >> col_bits;
  return CellAt(*this, GrayIndex(row_value), GrayIndex(col_value));
}

std::string_view ToString(KMapCell cell) {
  switch (cell) {
    case KMapCell::kZero:
      return "0";
    case KMapCell::kOne:
      return "1";
    case KMapCell::kDontCare:
      return "X";
  }
  return "0";
}

std::size_t BodyIndexFor(Classification2 c) {
  switch (c) {
    case Classification2::kFsmImplied:
      return 0;
    case Classification2::kTruthTable:
      return 1;
    case Classification2::kBooleanExpression:
      return 2;
    case Classification2::kKMap:
      return 3;
    case Classification2::kMuxMapping:
      return 4;
    case Classification2::kOther:
      break;
  }
  throw PreconditionError("classification `other` has no intermediate representation");
}

std::vector<Violation> Validate(const IntermediateRep& ir, const ParseOptions& options,
                                Diagnostics* diagnostics) {
  std::vector<Violation> out;
  if (ir.classification == Classification2::kOther) {
    out.push_back({"classification_mismatch", "classification `other` carries no IR"});
    return out;
  }
  if (BodyIndexFor(ir.classification) != ir.body.index()) {
    out.push_back({"classification_mismatch",
                   fmt::format("IR body does not match classification `{}`", aot::ToString(ir.classification))});
    return out;
  }
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, FsmIr>) {
          ValidateFsm(body, out);
        } else if constexpr (std::is_same_v<T, TruthTableIr>) {
          ValidateTruthTable(body, options, out, diagnostics);
        } else if constexpr (std::is_same_v<T, BooleanEqnsIr>) {
          ValidateBoolean(body, out);
        } else if constexpr (std::is_same_v<T, KMapIr>) {
          ValidateKMap(body, out);
        } else {
          ValidateMux(body, out);
        }
      },
      ir.body);
  return out;
}

namespace {

IntermediateRep ParseDocument(const json& doc, Classification2 expected, const ParseOptions& options,
                              Diagnostics* diagnostics, std::vector<Violation> violations) {
  std::size_t index = BodyIndexFor(expected);
  if (!doc.is_object()) throw SchemaError("", fmt::format("expected JSON object, got {}", doc.type_name()));
  IntermediateRep ir;
  ir.classification = expected;
  switch (index) {
    case 0:
      ir.body = ParseFsm(doc, diagnostics);
      break;
    case 1:
      ir.body = ParseTruthTable(doc, diagnostics, violations);
      break;
    case 2:
      ir.body = ParseBoolean(doc, diagnostics);
      break;
    case 3:
      ir.body = ParseKMap(doc, diagnostics, violations);
      break;
    default:
      ir.body = ParseMux(doc, diagnostics, violations);
      break;
  }
  auto more = Validate(ir, options, diagnostics);
  violations.insert(violations.end(), more.begin(), more.end());
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return ir;
}

}  // namespace

IntermediateRep ParseIr(std::string_view raw, Classification2 expected, const ParseOptions& options,
                        Diagnostics* diagnostics) {
  BodyIndexFor(expected);
  std::vector<DuplicateKey> duplicates;
  json doc = ParseTracking(raw, duplicates);
  std::vector<Violation> violations;
  for (const auto& d : duplicates) {
    if (d.object == "mapping") {
      violations.push_back({"mux_duplicate_select", fmt::format("select value {} is mapped more than once", d.key)});
    } else if (d.object == "expressions") {
      violations.push_back({"duplicate_expression", fmt::format("output `{}` has more than one expression", d.key)});
    } else {
      violations.push_back({"duplicate_key", fmt::format("key `{}` repeated in object `{}`", d.key, d.object)});
    }
  }
  return ParseDocument(doc, expected, options, diagnostics, std::move(violations));
}

IntermediateRep ParseIr(const json& doc, Classification2 expected, const ParseOptions& options,
                        Diagnostics* diagnostics) {
  return ParseDocument(doc, expected, options, diagnostics, {});
}

json ToJson(const IntermediateRep& ir) {
  return std::visit(
      [](const auto& body) -> json {
        using T = std::decay_t<decltype(body)>;
        json j = json::object();
        if constexpr (std::is_same_v<T, FsmIr>) {
          j["states"] = body.states;
          j["transitions"] = json::array();
          for (const auto& t : body.transitions) {
            j["transitions"].push_back({{"from", t.from}, {"to", t.to}, {"cond", t.cond}});
          }
          j["outputs"] = json::array();
          for (const auto& o : body.outputs) {
            j["outputs"].push_back({{"state", o.state}, {"signal", o.signal}, {"value", o.value}});
          }
        } else if constexpr (std::is_same_v<T, TruthTableIr>) {
          j["inputs"] = body.inputs;
          j["output"] = body.output;
          j["rows"] = json::array();
          for (const auto& r : body.rows) j["rows"].push_back({{"in", r.in}, {"out", r.out}});
        } else if constexpr (std::is_same_v<T, BooleanEqnsIr>) {
          j["inputs"] = body.inputs;
          j["outputs"] = body.outputs;
          j["expressions"] = body.expressions;
        } else if constexpr (std::is_same_v<T, KMapIr>) {
          j["row_vars"] = body.row_vars;
          j["col_vars"] = body.col_vars;
          j["cells"] = json::array();
          for (const auto& row : body.cells) {
            json r = json::array();
            for (auto c : row) {
              if (c == KMapCell::kDontCare) {
                r.push_back("X");
              } else {
                r.push_back(c == KMapCell::kOne ? 1 : 0);
              }
            }
            j["cells"].push_back(std::move(r));
          }
          if (body.output) j["output"] = *body.output;
        } else {
          j["data_inputs"] = body.data_inputs;
          j["select"] = {{"name", body.select_name}, {"width", body.select_width}};
          j["output"] = body.output;
          j["mapping"] = json::object();
          for (const auto& [sel, target] : body.mapping) {
            j["mapping"][std::to_string(sel)] = target.constant ? *target.constant : target.input;
          }
        }
        return j;
      },
      ir.body);
}

std::string Serialize(const IntermediateRep& ir) { return ToJson(ir).dump(2); }

Classification2 DetectClassification(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "IR document is not an object");
  if (doc.contains("states")) return Classification2::kFsmImplied;
  if (doc.contains("rows")) return Classification2::kTruthTable;
  if (doc.contains("expressions")) return Classification2::kBooleanExpression;
  if (doc.contains("cells")) return Classification2::kKMap;
  if (doc.contains("mapping")) return Classification2::kMuxMapping;
  throw SchemaError("", "cannot tell which IR structure this document is");
}

}  // namespace aot::ir
