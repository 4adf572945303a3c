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

// Deterministic IR to Verilog-2001 lowering. Used as an LLM-free reference
// implementation and by the `aot ir lower` tool.

#ifndef AOT_LOWER_H_
#define AOT_LOWER_H_

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aot/bool_expr.h"
#include "aot/ir.h"
#include "aot/problem.h"

namespace aot {

struct FsmArc {
  BoolExpr guard;
  std::size_t target = 0;
};

// Resolved next-state structure of an FSM IR: arcs per source state in list
// order. The first arc whose guard holds wins; with none the state holds.
struct FsmPlan {
  std::vector<std::string> states;
  std::vector<std::vector<FsmArc>> arcs;

  std::set<std::string> GuardVariables() const;
  std::vector<std::size_t> EnabledArcs(std::size_t state,
                                       const std::function<bool(const std::string&)>& lookup) const;
  std::size_t NextState(std::size_t state, const std::function<bool(const std::string&)>& lookup) const;
};

// Throws ValidationError for invalid IRs and ExpressionError for bad guards.
FsmPlan PlanFsm(const ir::FsmIr& fsm);

// Lowers `ir` to a complete module using `module_header` verbatim as the
// declaration. Throws LoweringError when the IR references a signal the
// header lacks (FSMs also need a clock and a reset input), ValidationError
// for invalid IRs and ExpressionError for unparsable expressions. Warnings
// (priority-resolved guards, missing truth-table rows) go to `diagnostics`.
std::string LowerToVerilog(const ir::IntermediateRep& ir, std::string_view module_header,
                           Diagnostics* diagnostics = nullptr);

}  // namespace aot

#endif  // AOT_LOWER_H_
