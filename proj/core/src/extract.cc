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

#include "aot/extract.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

#include <nlohmann/json.hpp>

#include "aot/errors.h"
#include "aot/strings.h"
#include "aot/verilog_module.h"

namespace aot {
namespace {

bool IsWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

// Lowercase, every non-word character becomes a space.
std::string NormalizeWords(std::string_view s) {
  std::string out(s.size(), ' ');
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    out[i] = IsWordChar(c) ? c : ' ';
  }
  return out;
}

// Collapses runs of spaces so multi-word terms match across line breaks.
std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool space = true;
  for (char c : s) {
    if (c == ' ') {
      if (!space) out.push_back(' ');
      space = true;
    } else {
      out.push_back(c);
      space = false;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

struct Fence {
  std::size_t content_begin;
  std::size_t content_end;
};

// ``` fenced blocks; the info string on the opening line is skipped.
std::vector<Fence> FindFences(std::string_view text) {
  std::vector<Fence> fences;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t line_end = text.find('\n', open);
    if (line_end == std::string_view::npos) break;
    std::size_t close = text.find("```", line_end + 1);
    if (close == std::string_view::npos) {
      // A fence left open runs to the end of the text.
      fences.push_back({line_end + 1, text.size()});
      break;
    }
    fences.push_back({line_end + 1, close});
    pos = close + 3;
  }
  return fences;
}

bool ParsesAsObject(std::string_view s) {
  auto doc = nlohmann::json::parse(s.begin(), s.end(), nullptr, false);
  return !doc.is_discarded() && doc.is_object();
}

// Position of the brace closing the one at `open`, honouring JSON strings.
std::optional<std::size_t> MatchBrace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

// Replaces comment characters with spaces, keeping offsets stable.
std::string MaskComments(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    if (out[i] == '"') {
      ++i;
      while (i < out.size() && out[i] != '"' && out[i] != '\n') {
        if (out[i] == '\\') ++i;
        ++i;
      }
      ++i;
    } else if (out.compare(i, 2, "//") == 0) {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    } else if (out.compare(i, 2, "/*") == 0) {
      std::size_t end = out.find("*/", i + 2);
      end = end == std::string::npos ? out.size() : end + 2;
      for (; i < end; ++i) {
        if (out[i] != '\n') out[i] = ' ';
      }
    } else {
      ++i;
    }
  }
  return out;
}

// Removes lines that are fence markers (```verilog, ```).
std::string DropFenceLines(std::string_view text) {
  std::string out;
  for (auto line : SplitLines(text)) {
    if (Trim(line).starts_with("```")) {
      out += '\n';  // keep line structure
      continue;
    }
    out.append(line);
    out += '\n';
  }
  return out;
}

struct ModuleDecl {
  std::size_t begin;  // offset of `module`
  std::string name;
};

// `module <name>` followed by a port list, parameter list or ';'. Prose
// such as "the module top_module is" is not a declaration.
std::vector<ModuleDecl> FindModuleDecls(const std::string& masked) {
  static const std::regex kDecl(R"(\bmodule\s+([A-Za-z_][A-Za-z0-9_$]*)\s*(?:#|\(|;))");
  std::vector<ModuleDecl> decls;
  for (auto it = std::sregex_iterator(masked.begin(), masked.end(), kDecl); it != std::sregex_iterator(); ++it) {
    auto pos = static_cast<std::size_t>(it->position(0));
    // `endmodule` also ends in "module"; \b already rules out "endmodule x(".
    decls.push_back({pos, (*it)[1].str()});
  }
  return decls;
}

std::string StripQuoted(std::string_view line) {
  std::string out;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '`') {
      quote = c;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string ExtractFinalWord(std::string_view text, const std::vector<std::string>& vocabulary) {
  if (vocabulary.empty()) throw PreconditionError("empty vocabulary");
  std::string haystack = " " + CollapseSpaces(NormalizeWords(text)) + " ";
  std::optional<std::size_t> best_end;
  std::size_t best_len = 0;
  std::string best;
  for (const auto& term : vocabulary) {
    std::string needle = CollapseSpaces(NormalizeWords(term));
    if (needle.empty()) continue;
    std::string padded = " " + needle + " ";
    std::size_t pos = haystack.rfind(padded);
    if (pos == std::string::npos) continue;
    std::size_t end = pos + padded.size();
    if (!best_end || end > *best_end || (end == *best_end && needle.size() > best_len)) {
      best_end = end;
      best_len = needle.size();
      best = term;
    }
  }
  if (!best_end) {
    throw ExtractionError(fmt::format("none of [{}] occurs in the response", Join(vocabulary, ", ")),
                          std::string(text));
  }
  return best;
}

std::string ExtractJsonBlock(std::string_view text) {
  for (const auto& f : FindFences(text)) {
    std::string_view content = Trim(text.substr(f.content_begin, f.content_end - f.content_begin));
    if (!content.empty() && ParsesAsObject(content)) return std::string(content);
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (begin, length)
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    if (auto close = MatchBrace(text, i)) candidates.emplace_back(i, *close - i + 1);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [begin, length] : candidates) {
    if (ParsesAsObject(text.substr(begin, length))) return std::string(text.substr(begin, length));
  }
  throw ExtractionError("no JSON object found in the response", std::string(text));
}

std::vector<std::string> ExtractPseudocode(std::string_view text) {
  std::string_view body = text;
  for (const auto& f : FindFences(text)) {
    std::string_view content = text.substr(f.content_begin, f.content_end - f.content_begin);
    if (!Trim(content).empty()) {
      body = content;
      break;
    }
  }
  std::vector<std::string> lines;
  for (auto line : SplitLines(body)) {
    std::string_view t = Trim(line);
    if (t.empty() || t.starts_with("```")) continue;
    lines.emplace_back(t);
  }
  if (lines.empty()) throw ExtractionError("no pseudocode in the response", std::string(text));

  static const std::regex kAlways(R"(\balways\s*@)");
  static const std::regex kAssign(R"(\bassign\s+[A-Za-z_][\w$]*(\s*\[[^\]]*\])?\s*=([^=]|$))");
  static const std::regex kEndmodule(R"(\bendmodule\b)");
  for (const auto& line : lines) {
    std::string bare = StripQuoted(line);
    if (std::regex_search(bare, kAlways) || std::regex_search(bare, kAssign) ||
        std::regex_search(bare, kEndmodule)) {
      throw LeakError(fmt::format("pseudocode contains Verilog: `{}`", line), std::string(text));
    }
  }
  return lines;
}

std::string ExtractVerilogModule(std::string_view text, std::string_view expected_name) {
  std::string cleaned = DropFenceLines(text);
  std::string masked = MaskComments(cleaned);
  auto decls = FindModuleDecls(masked);
  static const std::regex kEnd(R"(\bendmodule\b)");
  for (std::size_t d = 0; d < decls.size(); ++d) {
    if (decls[d].name != expected_name) continue;
    std::smatch m;
    auto from = masked.cbegin() + static_cast<std::ptrdiff_t>(decls[d].begin);
    if (!std::regex_search(from, masked.cend(), m, kEnd)) {
      throw StructureError(fmt::format("module {} has no endmodule", expected_name), std::string(text));
    }
    std::size_t end = decls[d].begin + static_cast<std::size_t>(m.position(0)) + m.length(0);
    if (d + 1 < decls.size() && decls[d + 1].begin < end) {
      throw StructureError(fmt::format("module {} is not closed before the next module", expected_name),
                           std::string(text));
    }
    return cleaned.substr(decls[d].begin, end - decls[d].begin);
  }
  throw ExtractionError(fmt::format("no module named {} in the response", expected_name), std::string(text));
}

std::string AssembleCandidate(const DesignProblem& problem, std::string_view response) {
  std::string name = ModuleName(problem.module_header);
  std::string cleaned = DropFenceLines(response);
  if (FindModuleDecls(MaskComments(cleaned)).empty()) {
    std::string body(Trim(cleaned));
    static const std::regex kEnd(R"(\bendmodule\s*$)");
    std::string out = std::string(Trim(problem.module_header)) + "\n" + body + "\n";
    if (!std::regex_search(body, kEnd)) out += "endmodule\n";
    return out;
  }
  return ExtractVerilogModule(response, name) + "\n";
}

}  // namespace aot
