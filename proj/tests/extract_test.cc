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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "aot/errors.h"
#include "aot/problem.h"
#include "aot/strings.h"
#include "test_support.h"

namespace aot {
namespace {

TEST(FinalWordTest, LastOccurrenceWins) {
  const auto& vocab = Classification1Vocabulary();
  EXPECT_EQ(ExtractFinalWord("It is not combinational; it is sequential.", vocab), "sequential");
  EXPECT_EQ(ExtractFinalWord("Sequential? No.\n**Combinational**", vocab), "combinational");
}

TEST(FinalWordTest, WholeWordsOnly) {
  EXPECT_THROW(ExtractFinalWord("nonsequentially", Classification1Vocabulary()), ExtractionError);
}

TEST(FinalWordTest, MultiWordTermsAndPunctuation) {
  const auto& vocab = Classification2Vocabulary();
  EXPECT_EQ(ExtractFinalWord("Answer: `truth_table`", vocab), "truth_table");
  EXPECT_EQ(ExtractFinalWord("The best fit is a Karnaugh map.", vocab), "karnaugh map");
  EXPECT_EQ(ParseClassification2(ExtractFinalWord("final answer: K-Map", vocab)), Classification2::kKMap);
  // "mux mapping" ends later than "mux" at the same place, so the longer term is chosen.
  EXPECT_EQ(ExtractFinalWord("mux mapping", vocab), "mux mapping");
}

TEST(FinalWordTest, ErrorsKeepTheRawText) {
  try {
    ExtractFinalWord("no idea", Classification1Vocabulary());
    FAIL();
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.raw(), "no idea");
  }
  EXPECT_THROW(ExtractFinalWord("x", {}), PreconditionError);
}

TEST(JsonBlockTest, PrefersFencedBlock) {
  std::string text = "Here {not json}\n```json\n{\"a\": 1}\n```\nand {\"b\": {\"c\": 2}}";
  EXPECT_EQ(ExtractJsonBlock(text), "{\"a\": 1}");
}

TEST(JsonBlockTest, FallsBackToLargestBalancedObject) {
  std::string text = "The IR is {\"states\": [\"A\"], \"x\": {\"y\": 1}} as requested.";
  auto block = ExtractJsonBlock(text);
  EXPECT_EQ(block, "{\"states\": [\"A\"], \"x\": {\"y\": 1}}");
  EXPECT_NE(text.find(block), std::string::npos);
}

TEST(JsonBlockTest, BracesInsideStrings) {
  std::string text = "x {\"cond\": \"a } b\", \"n\": 1} y";
  EXPECT_EQ(nlohmann::json::parse(ExtractJsonBlock(text))["n"], 1);
}

TEST(JsonBlockTest, NothingFound) {
  EXPECT_THROW(ExtractJsonBlock("no object { here"), ExtractionError);
  EXPECT_THROW(ExtractJsonBlock("```json\n[1, 2]\n```"), ExtractionError);
}

TEST(PseudocodeTest, IndentedCounterPseudocodeIsAccepted) {
  auto lines = ExtractPseudocode(testing::ReadFixture("counter_pseudocode.txt"));
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[3], "If true, assign q <- 1 to reset the counter to the initial state (count 1)");
  EXPECT_EQ(lines[7], "End the always block and conclude the module definition");
}

TEST(PseudocodeTest, FenceAndProseAreRemoved) {
  auto lines = ExtractPseudocode("Sure:\n```\nstep one\n\n  step two  \n```\nDone.");
  EXPECT_EQ(lines, (std::vector<std::string>{"step one", "step two"}));
}

TEST(PseudocodeTest, VerilogLeaksAreRejected) {
  EXPECT_THROW(ExtractPseudocode("always @(posedge clk) q <= 1;"), LeakError);
  EXPECT_THROW(ExtractPseudocode("assign y = a & b;"), LeakError);
  EXPECT_THROW(ExtractPseudocode("assign out[3] = 1"), LeakError);
  EXPECT_THROW(ExtractPseudocode("step\nendmodule"), LeakError);
}

TEST(PseudocodeTest, QuotedOrComparisonTextIsNotALeak) {
  EXPECT_NO_THROW(ExtractPseudocode("Write \"assign y = a\" in prose only"));
  EXPECT_NO_THROW(ExtractPseudocode("Check whether assign flag == 1"));
  EXPECT_NO_THROW(ExtractPseudocode("Use `endmodule` to conclude"));
}

TEST(PseudocodeTest, EmptyResponse) { EXPECT_THROW(ExtractPseudocode("\n  \n```\n```"), ExtractionError); }

TEST(VerilogModuleTest, PicksTheExpectedModule) {
  std::string text =
      "```verilog\nmodule helper(input a, output y); assign y = a; endmodule\n"
      "module top_module(input a, output y);\n  helper h(a, y);\nendmodule\n```";
  EXPECT_EQ(ExtractVerilogModule(text, "top_module"),
            "module top_module(input a, output y);\n  helper h(a, y);\nendmodule");
}

TEST(VerilogModuleTest, EndmoduleInCommentDoesNotClose) {
  std::string text = "module top_module(input a, output y);\n  // endmodule\n  assign y = a;\nendmodule\n";
  EXPECT_EQ(ExtractVerilogModule(text, "top_module"), Trim(text));
}

TEST(VerilogModuleTest, Errors) {
  EXPECT_THROW(ExtractVerilogModule("module other(); endmodule", "top_module"), ExtractionError);
  EXPECT_THROW(ExtractVerilogModule("module top_module(input a);\n assign", "top_module"), StructureError);
  EXPECT_THROW(ExtractVerilogModule("module top_module(input a);\nmodule b(); endmodule", "top_module"),
               StructureError);
}

TEST(AssembleTest, BodyOnlyResponsesGetTheHeader) {
  auto p = testing::FixtureProblem("xor_table");
  std::string out = AssembleCandidate(p, "```verilog\n  assign out = a ^ b;\n```");
  EXPECT_EQ(out, std::string(Trim(p.module_header)) + "\nassign out = a ^ b;\nendmodule\n");
  std::string with_end = AssembleCandidate(p, "assign out = a ^ b;\nendmodule");
  EXPECT_EQ(with_end, std::string(Trim(p.module_header)) + "\nassign out = a ^ b;\nendmodule\n");
}

TEST(AssembleTest, FullModuleIsExtracted) {
  auto p = testing::FixtureProblem("xor_table");
  std::string out = AssembleCandidate(p, "Here:\nmodule top_module(input a, input b, output out);\n"
                                         "assign out = a ^ b;\nendmodule\nThanks");
  EXPECT_EQ(out, "module top_module(input a, input b, output out);\nassign out = a ^ b;\nendmodule\n");
}

TEST(AssembleTest, CanonicalSolutionsAssemble) {
  for (const auto& p : testing::FixtureProblems()) {
    std::string out = AssembleCandidate(p, *p.canonical_solution);
    EXPECT_EQ(out.rfind("module top_module", 0), 0u) << p.task_id;
    EXPECT_EQ(CountOccurrences(out, "endmodule"), 1u) << p.task_id;
  }
}

}  // namespace
}  // namespace aot
