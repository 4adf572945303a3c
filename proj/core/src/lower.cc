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

#include "aot/lower.h"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "aot/errors.h"
#include "aot/kmap.h"
#include "aot/strings.h"
#include "aot/verilog_module.h"

namespace aot {
namespace {

constexpr std::size_t kMaxExclusivityVars = 12;

std::string Binary(std::uint64_t value, int width) {
  std::string bits;
  for (int i = width - 1; i >= 0; --i) bits += ((value >> i) & 1u) ? '1' : '0';
  return fmt::format("{}'b{}", width, bits);
}

std::string OneHot(std::size_t index, std::size_t width) {
  std::string bits(width, '0');
  bits[width - 1 - index] = '1';
  return fmt::format("{}'b{}", width, bits);
}

std::string Range(const Port& p) {
  if (p.width() == 1 && p.msb == 0 && p.lsb == 0) return "";
  return fmt::format("[{}:{}] ", p.msb, p.lsb);
}

// Emits the module around the header and collects per-output drivers.
class ModuleWriter {
 public:
  explicit ModuleWriter(std::string_view header_text) : header_(ParseModuleHeader(header_text)) {}

  const ModuleHeader& header() const { return header_; }

  const Port& RequirePort(std::string_view reference, PortDirection direction, std::string_view role) {
    std::string base = BaseName(reference);
    const Port* port = header_.Find(base);
    if (!port || port->direction != direction) {
      throw LoweringError(fmt::format("{} `{}` is not an {} port of module {}", role, reference,
                                      direction == PortDirection::kInput ? "input" : "output",
                                      header_.name));
    }
    return *port;
  }

  // Width of a reference: a bit-select is one bit.
  int WidthOf(std::string_view reference, const Port& port) const {
    return reference.find('[') != std::string_view::npos ? 1 : port.width();
  }

  void CheckExpressionInputs(const BoolExpr& e, std::string_view context) {
    for (const auto& v : e.Variables()) {
      const Port& p = RequirePort(v, PortDirection::kInput, "signal");
      if (WidthOf(v, p) != 1) {
        throw LoweringError(fmt::format("{}: `{}` is {} bits wide; use a bit-select", context, v, p.width()));
      }
    }
  }

  // Name to assign inside an always block for output port `base`. Wire
  // ports are driven through an internal reg.
  std::string ProceduralTarget(const Port& port) {
    driven_.insert(port.name);
    if (port.is_reg) return port.name;
    std::string shadow = port.name + "_aot";
    if (shadows_.insert(port.name).second) {
      decls_ += fmt::format("  reg {}{};\n", Range(port), shadow);
      decls_ += fmt::format("  assign {} = {};\n", port.name, shadow);
    }
    return shadow;
  }

  // Drives a whole output (or one bit of it) with a combinational expression.
  void Drive(std::string_view reference, const std::string& expr) {
    const Port& port = RequirePort(reference, PortDirection::kOutput, "output");
    driven_.insert(port.name);
    std::string suffix(reference.substr(std::min(reference.find('['), reference.size())));
    if (port.is_reg) {
      body_ += fmt::format("  always @(*) {}{} = {};\n", port.name, suffix, expr);
    } else {
      body_ += fmt::format("  assign {}{} = {};\n", port.name, suffix, expr);
    }
  }

  void AddDecl(const std::string& text) { decls_ += text; }
  void AddBody(const std::string& text) { body_ += text; }

  std::string Finish() {
    std::string tie;
    for (const Port* p : header_.Outputs()) {
      if (driven_.contains(p->name)) continue;
      if (p->is_reg) {
        tie += fmt::format("  always @(*) {} = {};\n", p->name, Binary(0, p->width()));
      } else {
        tie += fmt::format("  assign {} = {};\n", p->name, Binary(0, p->width()));
      }
    }
    std::string out = header_.declaration + "\n";
    out += decls_;
    if (!decls_.empty()) out += "\n";
    out += body_;
    out += tie;
    out += "endmodule\n";
    return out;
  }

 private:
  ModuleHeader header_;
  std::string decls_;
  std::string body_;
  std::set<std::string> driven_;
  std::set<std::string> shadows_;
};

bool IsClockName(std::string_view n) { return n == "clk" || n == "clock"; }

struct ResetInfo {
  std::string name;
  bool async = false;
  bool active_low = false;
};

std::optional<ResetInfo> FindReset(const ModuleHeader& header) {
  static const std::vector<std::string> kNames = {"reset", "rst", "areset", "arst", "resetn", "reset_n",
                                                  "rstn", "rst_n", "aresetn", "areset_n", "arstn", "arst_n"};
  for (const auto& candidate : kNames) {
    const Port* p = header.Find(candidate);
    if (!p || p->direction != PortDirection::kInput || p->width() != 1) continue;
    ResetInfo info;
    info.name = candidate;
    info.async = candidate.front() == 'a';
    info.active_low = candidate.back() == 'n';
    return info;
  }
  return std::nullopt;
}

void WarnOverlappingGuards(const FsmPlan& plan, Diagnostics* diagnostics) {
  if (!diagnostics) return;
  for (std::size_t s = 0; s < plan.arcs.size(); ++s) {
    std::set<std::string> vars;
    for (const auto& arc : plan.arcs[s]) {
      auto v = arc.guard.Variables();
      vars.insert(v.begin(), v.end());
    }
    if (vars.size() > kMaxExclusivityVars) continue;
    std::vector<std::string> names(vars.begin(), vars.end());
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << names.size()); ++a) {
      auto lookup = [&](const std::string& n) {
        auto it = std::find(names.begin(), names.end(), n);
        return ((a >> (it - names.begin())) & 1u) != 0;
      };
      if (plan.EnabledArcs(s, lookup).size() > 1) {
        diagnostics->Warn(fmt::format("state {}: transition guards overlap; list order decides",
                                      plan.states[s]));
        break;
      }
    }
  }
}

std::string LowerFsm(const ir::FsmIr& fsm, ModuleWriter& w, Diagnostics* diagnostics) {
  FsmPlan plan = PlanFsm(fsm);
  const ModuleHeader& h = w.header();
  const Port* clock = nullptr;
  for (const auto& p : h.ports) {
    if (p.direction == PortDirection::kInput && IsClockName(p.name)) clock = &p;
  }
  if (!clock) throw LoweringError(fmt::format("FSM lowering needs a clk or clock input on {}", h.name));
  auto reset = FindReset(h);
  if (!reset) throw LoweringError(fmt::format("FSM lowering needs a reset input on {}", h.name));
  for (const auto& arcs : plan.arcs) {
    for (const auto& arc : arcs) w.CheckExpressionInputs(arc.guard, "transition guard");
  }
  WarnOverlappingGuards(plan, diagnostics);

  std::size_t n = plan.states.size();
  std::string range = n > 1 ? fmt::format("[{}:0] ", n - 1) : "";
  w.AddDecl(fmt::format("  reg {}state;\n  reg {}next_state;\n", range, range));
  for (std::size_t i = 0; i < n; ++i) {
    w.AddDecl(fmt::format("  localparam {} = {};\n", "ST_" + std::to_string(i), i));
  }

  std::string next = "  always @(*) begin\n    next_state = state;\n    case (1'b1)\n";
  for (std::size_t s = 0; s < n; ++s) {
    next += fmt::format("      state[ST_{}]: begin  // {}\n", s, plan.states[s]);
    for (std::size_t a = 0; a < plan.arcs[s].size(); ++a) {
      const auto& arc = plan.arcs[s][a];
      next += fmt::format("        {}if ({}) next_state = {};\n", a ? "else " : "", arc.guard.ToVerilog(),
                          OneHot(arc.target, n));
    }
    next += "      end\n";
  }
  next += "      default: next_state = state;\n    endcase\n  end\n\n";
  w.AddBody(next);

  std::string active = reset->active_low ? "!" + reset->name : reset->name;
  std::string sensitivity = fmt::format("posedge {}", clock->name);
  if (reset->async) sensitivity += fmt::format(" or {} {}", reset->active_low ? "negedge" : "posedge", reset->name);
  w.AddBody(fmt::format(
      "  always @({}) begin\n    if ({}) state <= {};\n    else state <= next_state;\n  end\n\n", sensitivity,
      active, OneHot(0, n)));

  // Moore outputs: per-signal case over the state, default 0.
  std::map<std::string, std::vector<const ir::FsmOutput*>> by_signal;
  for (const auto& o : fsm.outputs) by_signal[o.signal].push_back(&o);
  for (const auto& [signal, outputs] : by_signal) {
    const Port& port = w.RequirePort(signal, PortDirection::kOutput, "output");
    int width = w.WidthOf(signal, port);
    std::string suffix = signal.find('[') != std::string::npos ? signal.substr(signal.find('[')) : "";
    for (const auto* o : outputs) {
      if (width < 63 && o->value >= (std::int64_t{1} << width)) {
        throw LoweringError(fmt::format("value {} for `{}` in state {} does not fit in {} bit(s)", o->value,
                                        signal, o->state, width));
      }
    }
    std::string target = w.ProceduralTarget(port) + suffix;
    std::string block = fmt::format("  always @(*) begin\n    {} = {};\n    case (1'b1)\n", target, Binary(0, width));
    for (const auto* o : outputs) {
      auto idx = std::find(plan.states.begin(), plan.states.end(), o->state) - plan.states.begin();
      block += fmt::format("      state[ST_{}]: {} = {};\n", idx, target,
                           Binary(static_cast<std::uint64_t>(o->value), width));
    }
    block += "      default: ;\n    endcase\n  end\n\n";
    w.AddBody(block);
  }
  return w.Finish();
}

std::string LowerTruthTable(const ir::TruthTableIr& tt, ModuleWriter& w, Diagnostics* diagnostics) {
  std::vector<std::string> inputs;
  for (const auto& in : tt.inputs) {
    const Port& p = w.RequirePort(in, PortDirection::kInput, "input");
    if (w.WidthOf(in, p) != 1) throw LoweringError(fmt::format("truth-table input `{}` is not one bit wide", in));
    inputs.push_back(in);
  }
  const Port& out = w.RequirePort(tt.output, PortDirection::kOutput, "output");
  int width = w.WidthOf(tt.output, out);
  std::string suffix = tt.output.find('[') != std::string::npos ? tt.output.substr(tt.output.find('[')) : "";
  for (const auto& row : tt.rows) {
    if (static_cast<int>(row.out.size()) != width) {
      throw LoweringError(fmt::format("truth-table rows carry {} output bit(s) but `{}` is {} bit(s) wide",
                                      row.out.size(), tt.output, width));
    }
  }
  std::size_t expected = std::size_t{1} << inputs.size();
  if (tt.rows.size() < expected && diagnostics) {
    diagnostics->Warn(fmt::format("truth table lists {} of {} rows; missing rows drive 0", tt.rows.size(), expected));
  }
  std::string target = w.ProceduralTarget(out) + suffix;
  std::string block = fmt::format("  always @(*) begin\n    case ({{{}}})\n", Join(inputs, ", "));
  std::vector<const ir::TruthTableRow*> rows;
  for (const auto& r : tt.rows) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->in < b->in; });
  for (const auto* r : rows) {
    std::uint64_t in = 0;
    for (int bit : r->in) in = (in << 1) | static_cast<std::uint64_t>(bit);
    std::uint64_t value = 0;
    for (int bit : r->out) value = (value << 1) | static_cast<std::uint64_t>(bit);
    block += fmt::format("      {}: {} = {};\n", Binary(in, static_cast<int>(inputs.size())), target,
                         Binary(value, width));
  }
  block += fmt::format("      default: {} = {};\n    endcase\n  end\n", target, Binary(0, width));
  w.AddBody(block);
  return w.Finish();
}

std::string LowerBoolean(const ir::BooleanEqnsIr& b, ModuleWriter& w) {
  for (const auto& name : b.outputs) {
    const std::string& text = b.expressions.at(name);
    BoolExpr e = ParseBoolExpr(text);
    w.CheckExpressionInputs(e, "expression for " + name);
    const Port& port = w.RequirePort(name, PortDirection::kOutput, "output");
    if (w.WidthOf(name, port) != 1) {
      throw LoweringError(fmt::format("output `{}` is {} bits wide; use one expression per bit", name,
                                      port.width()));
    }
    w.Drive(name, e.ToVerilog());
  }
  return w.Finish();
}

std::string LowerMux(const ir::MuxIr& m, ModuleWriter& w) {
  const Port& sel = w.RequirePort(m.select_name, PortDirection::kInput, "select");
  int sel_width = w.WidthOf(m.select_name, sel);
  if (sel_width != m.select_width) {
    throw LoweringError(fmt::format("select `{}` is {} bit(s) wide, IR says {}", m.select_name, sel_width,
                                    m.select_width));
  }
  const Port& out = w.RequirePort(m.output, PortDirection::kOutput, "output");
  int width = w.WidthOf(m.output, out);
  std::string suffix = m.output.find('[') != std::string::npos ? m.output.substr(m.output.find('[')) : "";
  for (const auto& in : m.data_inputs) w.RequirePort(in, PortDirection::kInput, "data input");
  std::string target = w.ProceduralTarget(out) + suffix;
  std::string block = fmt::format("  always @(*) begin\n    case ({})\n", m.select_name);
  for (const auto& [value, src] : m.mapping) {
    block += fmt::format("      {}: {} = {};\n", Binary(value, m.select_width), target,
                         src.constant ? *src.constant : src.input);
  }
  block += fmt::format("      default: {} = {};\n    endcase\n  end\n", target, Binary(0, width));
  w.AddBody(block);
  return w.Finish();
}

}  // namespace

std::set<std::string> FsmPlan::GuardVariables() const {
  std::set<std::string> vars;
  for (const auto& arcs_of_state : arcs) {
    for (const auto& arc : arcs_of_state) {
      auto v = arc.guard.Variables();
      vars.insert(v.begin(), v.end());
    }
  }
  return vars;
}

std::vector<std::size_t> FsmPlan::EnabledArcs(std::size_t state,
                                              const std::function<bool(const std::string&)>& lookup) const {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < arcs.at(state).size(); ++i) {
    if (arcs[state][i].guard.Evaluate(lookup)) enabled.push_back(i);
  }
  return enabled;
}

std::size_t FsmPlan::NextState(std::size_t state, const std::function<bool(const std::string&)>& lookup) const {
  for (const auto& arc : arcs.at(state)) {
    if (arc.guard.Evaluate(lookup)) return arc.target;
  }
  return state;
}

FsmPlan PlanFsm(const ir::FsmIr& fsm) {
  ir::IntermediateRep wrapped{Classification2::kFsmImplied, fsm};
  if (auto violations = ir::Validate(wrapped); !violations.empty()) throw ValidationError(std::move(violations));
  FsmPlan plan;
  plan.states = fsm.states;
  plan.arcs.resize(fsm.states.size());
  auto index_of = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(fsm.states.begin(), fsm.states.end(), s) - fsm.states.begin());
  };
  for (const auto& t : fsm.transitions) {
    plan.arcs[index_of(t.from)].push_back({ParseGuard(t.cond), index_of(t.to)});
  }
  return plan;
}

std::string LowerToVerilog(const ir::IntermediateRep& ir, std::string_view module_header,
                           Diagnostics* diagnostics) {
  ir::ParseOptions lenient;
  if (auto violations = ir::Validate(ir, lenient); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  ModuleWriter writer(module_header);
  return std::visit(
      [&](const auto& body) -> std::string {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, ir::FsmIr>) {
          return LowerFsm(body, writer, diagnostics);
        } else if constexpr (std::is_same_v<T, ir::TruthTableIr>) {
          return LowerTruthTable(body, writer, diagnostics);
        } else if constexpr (std::is_same_v<T, ir::BooleanEqnsIr>) {
          return LowerBoolean(body, writer);
        } else if constexpr (std::is_same_v<T, ir::KMapIr>) {
          ir::KMapIr kmap = body;
          if (!kmap.output) {
            auto outputs = writer.header().Outputs();
            if (outputs.size() != 1) {
              throw LoweringError("K-map has no `output` and the header does not have exactly one output");
            }
            kmap.output = outputs.front()->name;
          }
          return LowerBoolean(MinimizeKMap(kmap), writer);
        } else {
          return LowerMux(body, writer);
        }
      },
      ir.body);
}

}  // namespace aot
