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

#include "aot/verilog_module.h"

#include <cctype>
#include <charconv>
#include <regex>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Splits on `sep` at bracket/paren depth zero.
std::vector<std::string> SplitTopLevel(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string current;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(current);
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  if (!Trim(current).empty()) parts.push_back(current);
  return parts;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '[') {
      std::size_t end = text.find(']', i);
      if (end == std::string_view::npos) end = text.size() - 1;
      tokens.emplace_back(text.substr(i, end - i + 1));
      i = end + 1;
    } else if (IsIdentStart(c) || c == '\\') {
      std::size_t start = i++;
      while (i < text.size() && IsIdentChar(text[i])) ++i;
      tokens.emplace_back(text.substr(start, i - start));
    } else {
      tokens.emplace_back(1, c);
      ++i;
    }
  }
  return tokens;
}

std::optional<int> ParseInt(std::string_view s) {
  s = Trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct DeclState {
  std::optional<PortDirection> direction;
  bool is_reg = false;
  bool is_signed = false;
  int msb = 0;
  int lsb = 0;
};

// Parses one comma-separated item of a declaration. Returns the declared
// name (if any) and updates `state` with keywords seen in this item.
std::optional<std::string> ParseDeclItem(std::string_view item, DeclState& state) {
  auto tokens = Tokenize(item);
  bool saw_keyword = false;
  std::optional<std::string> name;
  for (const auto& tok : tokens) {
    if (tok == "input" || tok == "output" || tok == "inout") {
      // A new direction resets the type carried over from earlier items.
      state = DeclState{};
      state.direction = tok == "input"    ? PortDirection::kInput
                        : tok == "output" ? PortDirection::kOutput
                                          : PortDirection::kInout;
      saw_keyword = true;
    } else if (tok == "reg" || tok == "logic") {
      if (!saw_keyword) {
        state.is_reg = false;
        state.is_signed = false;
        state.msb = state.lsb = 0;
      }
      state.is_reg = true;
      saw_keyword = true;
    } else if (tok == "wire" || tok == "tri") {
      saw_keyword = true;
    } else if (tok == "signed") {
      state.is_signed = true;
    } else if (tok.front() == '[') {
      std::string_view inner(tok);
      inner = inner.substr(1, inner.size() - 2);
      auto colon = inner.find(':');
      if (colon != std::string_view::npos) {
        auto msb = ParseInt(inner.substr(0, colon));
        auto lsb = ParseInt(inner.substr(colon + 1));
        state.msb = msb.value_or(0);
        state.lsb = lsb.value_or(0);
      }
    } else if (IsIdentStart(tok.front())) {
      name = tok;
    } else if (tok == "=") {
      break;  // default value
    }
  }
  return name;
}

}  // namespace

const Port* ModuleHeader::Find(std::string_view port_name) const {
  for (const auto& p : ports) {
    if (p.name == port_name) return &p;
  }
  return nullptr;
}

std::vector<const Port*> ModuleHeader::Inputs() const {
  std::vector<const Port*> out;
  for (const auto& p : ports) {
    if (p.direction == PortDirection::kInput) out.push_back(&p);
  }
  return out;
}

std::vector<const Port*> ModuleHeader::Outputs() const {
  std::vector<const Port*> out;
  for (const auto& p : ports) {
    if (p.direction == PortDirection::kOutput) out.push_back(&p);
  }
  return out;
}

std::string StripVerilogComments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '"') {
      std::size_t start = i++;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\') ++i;
        ++i;
      }
      ++i;
      out.append(text.substr(start, std::min(i, text.size()) - start));
    } else if (text.compare(i, 2, "//") == 0) {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (text.compare(i, 2, "/*") == 0) {
      std::size_t end = text.find("*/", i + 2);
      i = end == std::string_view::npos ? text.size() : end + 2;
      out.push_back(' ');
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string ModuleName(std::string_view header_text) {
  static const std::regex kModule(R"((^|[^\w$])module\s+([A-Za-z_][\w$]*))");
  std::string text = StripVerilogComments(header_text);
  std::smatch m;
  if (std::regex_search(text, m, kModule)) return m[2];
  return {};
}

ModuleHeader ParseModuleHeader(std::string_view raw) {
  std::string text = StripVerilogComments(raw);
  static const std::regex kModule(R"((^|[^\w$])module\s+([A-Za-z_][\w$]*))");
  std::smatch m;
  if (!std::regex_search(text, m, kModule)) {
    throw PreconditionError("module header has no `module <name>` declaration");
  }
  ModuleHeader header;
  header.name = m[2];
  std::size_t pos = static_cast<std::size_t>(m.position(0) + m.length(0));
  std::size_t decl_start = static_cast<std::size_t>(m.position(2)) - 0;
  // Back up to the `module` keyword itself.
  decl_start = text.rfind("module", decl_start);

  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto matching = [&](std::size_t open) -> std::size_t {
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) return i;
    }
    return std::string::npos;
  };

  skip_ws();
  if (pos < text.size() && text[pos] == '#') {
    ++pos;
    skip_ws();
    std::size_t close = matching(pos);
    if (close == std::string::npos) throw PreconditionError("unterminated parameter list");
    pos = close + 1;
    skip_ws();
  }
  if (pos >= text.size() || text[pos] != '(') {
    throw PreconditionError("module header `" + header.name + "` has no port list");
  }
  std::size_t close = matching(pos);
  if (close == std::string::npos) throw PreconditionError("unterminated port list");
  std::string_view list(text.data() + pos + 1, close - pos - 1);
  std::size_t after = text.find(';', close);
  std::size_t decl_end = after == std::string::npos ? close + 1 : after + 1;

  DeclState state;
  std::vector<std::string> bare_names;
  for (const auto& item : SplitTopLevel(list, ',')) {
    auto name = ParseDeclItem(item, state);
    if (!name) continue;
    if (state.direction) {
      header.ports.push_back(Port{*name, *state.direction, state.msb, state.lsb,
                                  state.is_reg, state.is_signed});
    } else {
      bare_names.push_back(*name);
    }
  }

  if (!bare_names.empty()) {
    // Non-ANSI: directions come from the statements after the port list.
    std::vector<Port> declared;
    std::size_t cursor = decl_end;
    while (cursor < text.size()) {
      std::size_t semi = text.find(';', cursor);
      if (semi == std::string::npos) break;
      std::string_view stmt(text.data() + cursor, semi - cursor);
      auto tokens = Tokenize(stmt);
      if (tokens.empty()) break;
      const auto& kw = tokens.front();
      if (kw != "input" && kw != "output" && kw != "inout" && kw != "reg" && kw != "wire") break;
      DeclState decl;
      for (const auto& item : SplitTopLevel(stmt, ',')) {
        auto name = ParseDeclItem(item, decl);
        if (!name) continue;
        Port* existing = nullptr;
        for (auto& p : declared) {
          if (p.name == *name) existing = &p;
        }
        if (decl.direction) {
          if (existing) {
            existing->direction = *decl.direction;
          } else {
            declared.push_back(Port{*name, *decl.direction, decl.msb, decl.lsb, decl.is_reg,
                                    decl.is_signed});
          }
        } else if (existing && decl.is_reg) {
          existing->is_reg = true;
        }
      }
      cursor = semi + 1;
      decl_end = cursor;
    }
    for (const auto& name : bare_names) {
      bool found = false;
      for (const auto& p : declared) {
        if (p.name == name) {
          header.ports.push_back(p);
          found = true;
        }
      }
      if (!found) throw PreconditionError("port `" + name + "` has no direction declaration");
    }
  }

  if (header.ports.empty()) {
    throw PreconditionError("module header `" + header.name + "` declares no ports");
  }
  header.declaration = std::string(Trim(std::string_view(text).substr(decl_start, decl_end - decl_start)));
  return header;
}

}  // namespace aot
