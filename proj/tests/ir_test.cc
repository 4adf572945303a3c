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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "aot/errors.h"
#include "test_support.h"

namespace aot::ir {
namespace {

using nlohmann::json;

struct InvalidCase {
  std::string file;
  Classification2 classification;
  bool strict;
  std::string kind;
};

std::vector<InvalidCase> InvalidCases() {
  std::vector<InvalidCase> cases;
  for (const auto& e : json::parse(testing::ReadFixture("ir/invalid/manifest.json"))) {
    cases.push_back({e["file"], *ParseClassification2(e["classification"].get<std::string>()), e["strict"], e["kind"]});
  }
  return cases;
}

class InvalidIrTest : public ::testing::TestWithParam<InvalidCase> {};

TEST_P(InvalidIrTest, RejectedWithTheExpectedViolation) {
  const auto& c = GetParam();
  std::string text = testing::ReadFixture("ir/invalid/" + c.file);
  try {
    ParseIr(std::string_view(text), c.classification, ParseOptions{c.strict});
    FAIL() << c.file << " was accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.Has(c.kind)) << c.file << ": " << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, InvalidIrTest, ::testing::ValuesIn(InvalidCases()),
                         [](const auto& info) {
                           std::string name = info.param.file.substr(0, info.param.file.find('.'));
                           return name;
                         });

TEST(IrTest, AtLeastFifteenMalformedFixtures) { EXPECT_GE(InvalidCases().size(), 15u); }

TEST(IrTest, ValidFixturesParseAndRoundTrip) {
  for (const auto& e : json::parse(testing::ReadFixture("ir/valid/manifest.json"))) {
    std::string text = testing::ReadFixture("ir/valid/" + e["file"].get<std::string>());
    auto c2 = *ParseClassification2(e["classification"].get<std::string>());
    auto ir = ParseIr(std::string_view(text), c2, {true});
    EXPECT_EQ(ir.classification, c2);
    EXPECT_EQ(DetectClassification(json::parse(text)), c2) << e["file"];
    auto again = ParseIr(std::string_view(Serialize(ir)), c2, {true});
    EXPECT_EQ(ir, again) << e["file"];
  }
}

TEST(IrTest, CounterFsmIsAccepted) {
  auto ir = ParseIr(std::string_view(testing::ReadFixture("ir/valid/counter_fsm.json")),
                    Classification2::kFsmImplied);
  const auto& fsm = std::get<FsmIr>(ir.body);
  ASSERT_EQ(fsm.states.size(), 10u);
  EXPECT_EQ(fsm.states.front(), "S1");
  EXPECT_EQ(fsm.states.back(), "S10");
  EXPECT_EQ(fsm.transitions.size(), 20u);
  EXPECT_EQ(fsm.transitions[19], (FsmTransition{"S10", "S1", "!reset"}));
  ASSERT_EQ(fsm.outputs.size(), 10u);
  EXPECT_EQ(fsm.outputs[9], (FsmOutput{"S10", "q", 10}));
}

TEST(IrTest, WrongStructureForClassificationIsASchemaError) {
  std::string fsm = testing::ReadFixture("ir/valid/counter_fsm.json");
  EXPECT_THROW(ParseIr(std::string_view(fsm), Classification2::kTruthTable), SchemaError);
  EXPECT_THROW(ParseIr(std::string_view("[1, 2]"), Classification2::kFsmImplied), SchemaError);
}

TEST(IrTest, OtherHasNoIrStructure) {
  EXPECT_THROW(ParseIr(std::string_view("{}"), Classification2::kOther), PreconditionError);
}

TEST(IrTest, NotJsonIsAParseFailure) {
  EXPECT_THROW(ParseIr(std::string_view("{\"states\": ["), Classification2::kFsmImplied), Error);
}

TEST(IrTest, MissingKeyIsASchemaErrorNamingTheKey) {
  try {
    ParseIr(std::string_view(R"({"states": ["A"], "outputs": []})"), Classification2::kFsmImplied);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.key(), "transitions");
  }
}

TEST(IrTest, PartialTruthTableWarnsWhenNotStrict) {
  std::string text = R"({"inputs": ["a", "b"], "output": "y", "rows": [{"in": [1, 1], "out": [1]}]})";
  Diagnostics diag;
  EXPECT_NO_THROW(ParseIr(std::string_view(text), Classification2::kTruthTable, {false}, &diag));
  EXPECT_FALSE(diag.warnings.empty());
  EXPECT_THROW(ParseIr(std::string_view(text), Classification2::kTruthTable, {true}), ValidationError);
}

TEST(IrTest, TruthTableBitsAcceptStrings) {
  std::string text = R"({"inputs": ["a", "b"], "output": "y", "rows": [{"in": "01", "out": "1"}]})";
  auto ir = ParseIr(std::string_view(text), Classification2::kTruthTable);
  EXPECT_EQ(std::get<TruthTableIr>(ir.body).rows[0].in, (std::vector<int>{0, 1}));
}

TEST(IrTest, UnknownKeysWarn) {
  std::string text = R"({"inputs": ["a"], "outputs": ["y"], "expressions": {"y": "!a"}, "note": "hi"})";
  Diagnostics diag;
  ParseIr(std::string_view(text), Classification2::kBooleanExpression, {}, &diag);
  ASSERT_EQ(diag.warnings.size(), 1u);
  EXPECT_NE(diag.warnings[0].find("note"), std::string::npos);
}

TEST(IrTest, MuxMappingAcceptsArrayFormAndConstants) {
  std::string text = R"({"data_inputs": ["a"], "select": {"name": "s", "width": 1}, "output": "y",
                         "mapping": [{"select": 0, "input": "a"}, {"select": "1'b1", "input": "1'b0"}]})";
  auto ir = ParseIr(std::string_view(text), Classification2::kMuxMapping);
  const auto& mux = std::get<MuxIr>(ir.body);
  ASSERT_EQ(mux.mapping.size(), 2u);
  EXPECT_EQ(mux.mapping.at(0).input, "a");
  EXPECT_EQ(mux.mapping.at(1).constant, "1'b0");
}

TEST(IrTest, KMapCellForMintermUsesGrayOrderedAxes) {
  // Columns are labelled 00 01 11 10 for (b, c).
  KMapIr k{{"a"}, {"b", "c"}, {{KMapCell::kZero, KMapCell::kOne, KMapCell::kDontCare, KMapCell::kZero},
                               {KMapCell::kOne, KMapCell::kZero, KMapCell::kZero, KMapCell::kOne}}, "y"};
  EXPECT_EQ(k.Variables(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(k.CellForMinterm(0b001), KMapCell::kOne);
  EXPECT_EQ(k.CellForMinterm(0b011), KMapCell::kDontCare);
  EXPECT_EQ(k.CellForMinterm(0b010), KMapCell::kZero);
  EXPECT_EQ(k.CellForMinterm(0b110), KMapCell::kOne);
}

}  // namespace
}  // namespace aot::ir
