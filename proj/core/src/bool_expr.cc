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

#include "aot/bool_expr.h"

#include <cctype>
#include <vector>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {

BoolExpr BoolExpr::Const(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = value;
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::Var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->name = std::move(name);
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::Not(BoolExpr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNot;
  n->lhs = std::make_shared<const BoolExpr>(std::move(operand));
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::And(BoolExpr lhs, BoolExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAnd;
  n->lhs = std::make_shared<const BoolExpr>(std::move(lhs));
  n->rhs = std::make_shared<const BoolExpr>(std::move(rhs));
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::Or(BoolExpr lhs, BoolExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kOr;
  n->lhs = std::make_shared<const BoolExpr>(std::move(lhs));
  n->rhs = std::make_shared<const BoolExpr>(std::move(rhs));
  return BoolExpr(std::move(n));
}

BoolExpr BoolExpr::Xor(BoolExpr lhs, BoolExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kXor;
  n->lhs = std::make_shared<const BoolExpr>(std::move(lhs));
  n->rhs = std::make_shared<const BoolExpr>(std::move(rhs));
  return BoolExpr(std::move(n));
}

std::set<std::string> BoolExpr::Variables() const {
  std::set<std::string> out;
  std::vector<const BoolExpr*> stack{this};
  while (!stack.empty()) {
    const BoolExpr* e = stack.back();
    stack.pop_back();
    switch (e->kind()) {
      case Kind::kConst:
        break;
      case Kind::kVar:
        out.insert(e->name());
        break;
      case Kind::kNot:
        stack.push_back(&e->lhs());
        break;
      default:
        stack.push_back(&e->lhs());
        stack.push_back(&e->rhs());
    }
  }
  return out;
}

bool BoolExpr::Evaluate(const std::function<bool(const std::string&)>& lookup) const {
  switch (kind()) {
    case Kind::kConst:
      return value();
    case Kind::kVar:
      return lookup(name());
    case Kind::kNot:
      return !lhs().Evaluate(lookup);
    case Kind::kAnd:
      return lhs().Evaluate(lookup) && rhs().Evaluate(lookup);
    case Kind::kOr:
      return lhs().Evaluate(lookup) || rhs().Evaluate(lookup);
    case Kind::kXor:
      return lhs().Evaluate(lookup) != rhs().Evaluate(lookup);
  }
  return false;
}

std::string BoolExpr::ToVerilog() const {
  switch (kind()) {
    case Kind::kConst:
      return value() ? "1'b1" : "1'b0";
    case Kind::kVar:
      return name();
    case Kind::kNot:
      return "~" + (lhs().kind() == Kind::kVar || lhs().kind() == Kind::kConst
                        ? lhs().ToVerilog()
                        : "(" + lhs().ToVerilog() + ")");
    case Kind::kAnd:
      return "(" + lhs().ToVerilog() + " & " + rhs().ToVerilog() + ")";
    case Kind::kOr:
      return "(" + lhs().ToVerilog() + " | " + rhs().ToVerilog() + ")";
    case Kind::kXor:
      return "(" + lhs().ToVerilog() + " ^ " + rhs().ToVerilog() + ")";
  }
  return {};
}

std::string BaseName(std::string_view reference) {
  auto bracket = reference.find('[');
  return std::string(Trim(reference.substr(0, bracket)));
}

namespace {

enum class Tok { kIdent, kConst, kNot, kAnd, kOr, kXor, kLParen, kRParen, kEnd };

struct Token {
  Tok type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> Lex(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto two = s.substr(i, 2);
    if (two == "&&" || two == "||") {
      tokens.push_back({two == "&&" ? Tok::kAnd : Tok::kOr, std::string(two), start});
      i += 2;
    } else if (c == '&' || c == '*' || c == '.') {
      tokens.push_back({Tok::kAnd, std::string(1, c), start});
      ++i;
    } else if (c == '|' || c == '+') {
      tokens.push_back({Tok::kOr, std::string(1, c), start});
      ++i;
    } else if (c == '^') {
      tokens.push_back({Tok::kXor, "^", start});
      ++i;
    } else if (c == '!' || c == '~') {
      tokens.push_back({Tok::kNot, std::string(1, c), start});
      ++i;
    } else if (c == '(') {
      tokens.push_back({Tok::kLParen, "(", start});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Tok::kRParen, ")", start});
      ++i;
    } else if (s.substr(i, 4) == "1'b0" || s.substr(i, 4) == "1'b1") {
      tokens.push_back({Tok::kConst, std::string(1, s[i + 3]), start});
      i += 4;
    } else if (c == '0' || c == '1') {
      if (i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1]))) {
        throw ExpressionError(start, "unexpected numeric literal");
      }
      tokens.push_back({Tok::kConst, std::string(1, c), start});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      std::string lower = ToLower(word);
      if (lower == "and") {
        tokens.push_back({Tok::kAnd, word, start});
      } else if (lower == "or") {
        tokens.push_back({Tok::kOr, word, start});
      } else if (lower == "xor") {
        tokens.push_back({Tok::kXor, word, start});
      } else if (lower == "not") {
        tokens.push_back({Tok::kNot, word, start});
      } else if (lower == "true" || lower == "false") {
        tokens.push_back({Tok::kConst, lower == "true" ? "1" : "0", start});
      } else {
        // Optional constant bit-select.
        std::size_t k = j;
        while (k < s.size() && s[k] == ' ') ++k;
        if (k < s.size() && s[k] == '[') {
          std::size_t close = s.find(']', k);
          if (close == std::string_view::npos) throw ExpressionError(k, "unterminated bit-select");
          std::string_view index = Trim(s.substr(k + 1, close - k - 1));
          if (index.empty()) throw ExpressionError(k, "empty bit-select");
          for (char d : index) {
            if (!std::isdigit(static_cast<unsigned char>(d))) {
              throw ExpressionError(k, "bit-select must be a constant integer");
            }
          }
          word += "[" + std::string(index) + "]";
          j = close + 1;
        }
        tokens.push_back({Tok::kIdent, word, start});
      }
      i = j;
    } else {
      throw ExpressionError(start, std::string("unexpected character `") + c + "`");
    }
  }
  tokens.push_back({Tok::kEnd, "", s.size()});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  BoolExpr Parse() {
    BoolExpr e = ParseOr();
    if (Peek().type != Tok::kEnd) {
      throw ExpressionError(Peek().pos, "unexpected `" + Peek().text + "`");
    }
    return e;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_++]; }

  BoolExpr ParseOr() {
    BoolExpr e = ParseXor();
    while (Peek().type == Tok::kOr) {
      Next();
      e = BoolExpr::Or(std::move(e), ParseXor());
    }
    return e;
  }
  BoolExpr ParseXor() {
    BoolExpr e = ParseAnd();
    while (Peek().type == Tok::kXor) {
      Next();
      e = BoolExpr::Xor(std::move(e), ParseAnd());
    }
    return e;
  }
  BoolExpr ParseAnd() {
    BoolExpr e = ParseUnary();
    while (Peek().type == Tok::kAnd) {
      Next();
      e = BoolExpr::And(std::move(e), ParseUnary());
    }
    return e;
  }
  BoolExpr ParseUnary() {
    if (Peek().type == Tok::kNot) {
      Next();
      return BoolExpr::Not(ParseUnary());
    }
    return ParseAtom();
  }
  BoolExpr ParseAtom() {
    const Token& t = Next();
    switch (t.type) {
      case Tok::kIdent:
        return BoolExpr::Var(t.text);
      case Tok::kConst:
        return BoolExpr::Const(t.text == "1");
      case Tok::kLParen: {
        BoolExpr e = ParseOr();
        if (Peek().type != Tok::kRParen) throw ExpressionError(Peek().pos, "expected `)`");
        Next();
        return e;
      }
      case Tok::kEnd:
        throw ExpressionError(t.pos, "unexpected end of expression");
      default:
        throw ExpressionError(t.pos, "unexpected `" + t.text + "`");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

BoolExpr ParseBoolExpr(std::string_view text) {
  return Parser(Lex(text)).Parse();
}

BoolExpr ParseGuard(std::string_view text) {
  std::string word = ToLower(Trim(text));
  if (word.empty() || word == "else" || word == "default" || word == "otherwise" || word == "always") {
    return BoolExpr::Const(true);
  }
  return ParseBoolExpr(text);
}

}  // namespace aot
