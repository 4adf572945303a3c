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

// Boolean expressions used by Boolean-equation IRs and FSM transition guards.
//
// Grammar (lowest to highest precedence):
//   or   := xor  (("OR"  | "|" | "||" | "+") xor)*
//   xor  := and  (("XOR" | "^") and)*
//   and  := unary (("AND" | "&" | "&&" | "*" | ".") unary)*
//   unary:= ("NOT" | "!" | "~") unary | atom
//   atom := ident ("[" int "]")? | "0" | "1" | "1'b0" | "1'b1" | "true" | "false" | "(" or ")"
// Keywords are case-insensitive.

#ifndef AOT_BOOL_EXPR_H_
#define AOT_BOOL_EXPR_H_

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace aot {

class BoolExpr {
 public:
  enum class Kind { kConst, kVar, kNot, kAnd, kOr, kXor };

  static BoolExpr Const(bool value);
  static BoolExpr Var(std::string name);
  static BoolExpr Not(BoolExpr operand);
  static BoolExpr And(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr Or(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr Xor(BoolExpr lhs, BoolExpr rhs);

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const BoolExpr& lhs() const { return *node_->lhs; }
  const BoolExpr& rhs() const { return *node_->rhs; }

  // Variable references, including any bit-select suffix ("in[2]").
  std::set<std::string> Variables() const;
  bool Evaluate(const std::function<bool(const std::string&)>& lookup) const;
  // Verilog expression using ~ & | ^ operators, fully parenthesized.
  std::string ToVerilog() const;

 private:
  struct Node {
    Kind kind = Kind::kConst;
    bool value = false;
    std::string name;
    std::shared_ptr<const BoolExpr> lhs;
    std::shared_ptr<const BoolExpr> rhs;
  };
  explicit BoolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Throws ExpressionError carrying the byte offset of the failure.
BoolExpr ParseBoolExpr(std::string_view text);

// Transition guard: like ParseBoolExpr, but an empty guard and the words
// "else", "default", "otherwise" and "always" mean constant true.
BoolExpr ParseGuard(std::string_view text);

// Base name of a reference: "in[2]" -> "in".
std::string BaseName(std::string_view reference);

}  // namespace aot

#endif  // AOT_BOOL_EXPR_H_
