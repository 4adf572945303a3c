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

// Parsing of model responses into typed artifacts.

#ifndef AOT_EXTRACT_H_
#define AOT_EXTRACT_H_

#include <string>
#include <string_view>
#include <vector>

#include "aot/problem.h"

namespace aot {

// Last whole-word occurrence of any vocabulary term, compared after
// lowercasing and replacing punctuation and markup with spaces. Returns the
// matching term as written in `vocabulary`. Throws ExtractionError (with the
// raw text) when no term occurs, PreconditionError for an empty vocabulary.
std::string ExtractFinalWord(std::string_view text, const std::vector<std::string>& vocabulary);

// First fenced code block that parses as one JSON object, else the largest
// balanced-brace substring that does. The result is a substring of `text`.
// Throws ExtractionError.
std::string ExtractJsonBlock(std::string_view text);

// Non-empty trimmed lines of the pseudocode, with prose around a code fence
// and the fence markers removed. Throws ExtractionError when nothing is
// left and LeakError when a line holds a Verilog statement (`always @`,
// `assign x =`, `endmodule`) outside double or back quotes.
std::vector<std::string> ExtractPseudocode(std::string_view text);

// The first `module <expected_name>` declaration through its `endmodule`.
// Throws ExtractionError when no such module exists and StructureError when
// it is not closed before the next module or the end of the text.
std::string ExtractVerilogModule(std::string_view text, std::string_view expected_name);

// Compilable candidate for `problem`: the extracted module, or, when the
// response holds no module declaration at all, the problem's header
// followed by the response body and `endmodule`.
std::string AssembleCandidate(const DesignProblem& problem, std::string_view response);

}  // namespace aot

#endif  // AOT_EXTRACT_H_
