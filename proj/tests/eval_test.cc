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

#include "aot/eval.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#ifdef AOT_HAVE_BOOST_MP
#include <boost/multiprecision/cpp_dec_float.hpp>
#endif

#include "aot/errors.h"
#include "test_support.h"

namespace aot {
namespace {

// Fraction of k-subsets of n samples (c correct) containing a correct one.
double PassAtKByEnumeration(int n, int c, int k) {
  int hits = 0;
  int total = 0;
  for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
    if (__builtin_popcount(subset) != k) continue;
    ++total;
    // Samples 0..c-1 are the correct ones.
    if (subset & ((1u << c) - 1u)) ++hits;
  }
  return static_cast<double>(hits) / total;
}

TEST(PassAtKTest, MatchesSubsetEnumeration) {
  for (int n = 1; n <= 10; ++n) {
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) {
        EXPECT_NEAR(PassAtK(n, c, k), PassAtKByEnumeration(n, c, k), 1e-12) << n << " " << c << " " << k;
      }
    }
  }
}

TEST(PassAtKTest, EdgeCases) {
  EXPECT_EQ(PassAtK(5, 0, 1), 0.0);
  EXPECT_EQ(PassAtK(5, 5, 1), 1.0);
  EXPECT_EQ(PassAtK(5, 2, 4), 1.0);
  EXPECT_DOUBLE_EQ(PassAtK(5, 2, 1), 0.4);
  EXPECT_THROW(PassAtK(0, 0, 1), DomainError);
  EXPECT_THROW(PassAtK(5, 6, 1), DomainError);
  EXPECT_THROW(PassAtK(5, 2, 6), DomainError);
  EXPECT_THROW(PassAtK(5, 2, 0), DomainError);
}

TEST(MeanSdTest, SmallCases) {
  auto one = ComputeMeanSd({0.25});
  EXPECT_DOUBLE_EQ(one.mean, 0.25);
  EXPECT_FALSE(one.sd.has_value());
  auto two = ComputeMeanSd({1, 3});
  EXPECT_DOUBLE_EQ(two.mean, 2);
  EXPECT_DOUBLE_EQ(*two.sd, std::sqrt(2.0));
  EXPECT_THROW(ComputeMeanSd({}), DomainError);
  EXPECT_EQ(*ComputeMeanSd({0.7, 0.7, 0.7}).sd, 0.0);
}

#ifdef AOT_HAVE_BOOST_MP
TEST(MeanSdTest, AgreesWithHighPrecisionReference) {
  using Big = boost::multiprecision::cpp_dec_float_100;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> len(2, 40);
    std::uniform_real_distribution<double> offset(-1e6, 1e6);
    std::normal_distribution<double> noise(0, std::pow(10.0, trial % 7 - 3));
    double base = offset(rng);
    std::vector<double> values(len(rng));
    for (auto& v : values) v = base + noise(rng);
    Big sum = 0;
    for (double v : values) sum += Big(v);
    Big mean = sum / values.size();
    Big ss = 0;
    for (double v : values) ss += (Big(v) - mean) * (Big(v) - mean);
    Big sd = boost::multiprecision::sqrt(ss / (values.size() - 1));
    auto got = ComputeMeanSd(values);
    double ref_mean = mean.convert_to<double>();
    double ref_sd = sd.convert_to<double>();
    EXPECT_LE(std::abs(got.mean - ref_mean), 1e-10 * std::abs(ref_mean)) << trial;
    EXPECT_LE(std::abs(*got.sd - ref_sd), 1e-10 * ref_sd) << trial;
  }
}
#endif

AbstractionTrace T(const std::string& id, int sample, int run) {
  AbstractionTrace t;
  t.task_id = id;
  t.sample_index = sample;
  t.run_index = run;
  return t;
}

SampleOutcome O(const AbstractionTrace& t, bool compiled, bool functional) {
  SampleOutcome o;
  o.task_id = t.task_id;
  o.sample_index = t.sample_index;
  o.run_index = t.run_index;
  o.compiled = compiled;
  o.functional = functional;
  return o;
}

StrategyConfig Config(int n, int runs) {
  StrategyConfig c;
  c.abstraction_model = "a";
  c.translation_model = "t";
  c.samples_per_problem = n;
  c.runs = runs;
  return c;
}

TEST(ScoreRunTest, TwoOfFiveFunctional) {
  std::vector<AbstractionTrace> traces;
  std::vector<SampleOutcome> outcomes;
  for (int s = 0; s < 5; ++s) {
    traces.push_back(T("p", s, 0));
    outcomes.push_back(O(traces.back(), s != 4, s < 2));
  }
  auto report = ScoreRun(traces, outcomes, Config(5, 1), {1, 3});
  EXPECT_DOUBLE_EQ(report.functional_pass_at_k.at(1).mean, 0.4);
  EXPECT_DOUBLE_EQ(report.compile_pass_at_k.at(1).mean, 0.8);
  EXPECT_NEAR(report.functional_pass_at_k.at(3).mean, 1.0 - 1.0 / 10.0, 1e-12);
  EXPECT_EQ(report.compile_pass_at_k.at(3).mean, 1.0);
  EXPECT_FALSE(report.functional_pass_at_k.at(1).sd.has_value());
  EXPECT_EQ(report.per_run[0].problems[0].functional, 2);
  EXPECT_EQ(report.label, "aot[base+ir+pseudo]");
}

TEST(ScoreRunTest, MeanAndSdAcrossRuns) {
  std::vector<AbstractionTrace> traces;
  std::vector<SampleOutcome> outcomes;
  // Run r has r+1 functional samples out of 4 for the single problem.
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 4; ++s) {
      traces.push_back(T("p", s, r));
      outcomes.push_back(O(traces.back(), true, s <= r));
    }
  }
  auto report = ScoreRun(traces, outcomes, Config(4, 3));
  auto m = report.functional_pass_at_k.at(1);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_NEAR(*m.sd, 0.25, 1e-15);
}

TEST(ScoreRunTest, AveragesOverProblems) {
  std::vector<AbstractionTrace> traces;
  std::vector<SampleOutcome> outcomes;
  for (const char* id : {"a", "b"}) {
    for (int s = 0; s < 2; ++s) {
      traces.push_back(T(id, s, 0));
      outcomes.push_back(O(traces.back(), true, std::string(id) == "a"));
    }
  }
  auto report = ScoreRun(traces, outcomes, Config(2, 1));
  EXPECT_DOUBLE_EQ(report.functional_pass_at_k.at(1).mean, 0.5);
  EXPECT_EQ(report.task_ids, (std::vector<std::string>{"a", "b"}));
}

TEST(ScoreRunTest, InconsistentInputsAreReportErrors) {
  std::vector<AbstractionTrace> traces = {T("p", 0, 0), T("p", 1, 0)};
  std::vector<SampleOutcome> outcomes = {O(traces[0], true, true), O(traces[1], true, false)};
  EXPECT_NO_THROW(ScoreRun(traces, outcomes, Config(2, 1)));
  EXPECT_THROW(ScoreRun(traces, {outcomes[0]}, Config(2, 1)), ReportError);
  EXPECT_THROW(ScoreRun(traces, {outcomes[1], outcomes[0]}, Config(2, 1)), ReportError);
  EXPECT_THROW(ScoreRun(traces, outcomes, Config(3, 1)), ReportError);
  EXPECT_THROW(ScoreRun(traces, outcomes, Config(2, 1), {3}), ReportError);
  auto bad = outcomes;
  bad[1] = O(traces[1], false, true);
  EXPECT_THROW(ScoreRun(traces, bad, Config(2, 1)), ReportError);
}

TEST(ScoreRunTest, TokenAccounting) {
  std::vector<AbstractionTrace> traces = {T("p", 0, 0), T("p", 1, 0)};
  traces[0].stage_records = {{Stage::kCls1, "", "", "a", 10, 120, ""},
                             {Stage::kIr, "", "", "a", 20, 90, ""},
                             {Stage::kPseudocode, "", "", "a", 30, 90, ""},
                             {Stage::kFinal, "", "", "t", 40, 200, ""}};
  traces[1].stage_records = traces[0].stage_records;
  std::vector<SampleOutcome> outcomes = {O(traces[0], true, true), O(traces[1], true, true)};
  auto report = ScoreRun(traces, outcomes, Config(2, 1));
  EXPECT_DOUBLE_EQ(*report.tokens.per_abstraction, 100.0);
  EXPECT_EQ(report.tokens.total_input, 200);
  EXPECT_EQ(report.tokens.total_output, 1000);
  EXPECT_DOUBLE_EQ(report.tokens.avg_output, 500.0);
  auto baseline = Config(2, 1);
  baseline.strategy = Strategy::kBaseline;
  EXPECT_FALSE(ScoreRun(traces, outcomes, baseline).tokens.per_abstraction.has_value());
}

TEST(ReportTest, JsonAndTables) {
  std::vector<AbstractionTrace> traces = {T("p", 0, 0)};
  std::vector<SampleOutcome> outcomes = {O(traces[0], true, false)};
  auto report = ScoreRun(traces, outcomes, Config(1, 1));
  auto doc = report.ToJson();
  EXPECT_EQ(doc["compile"]["pass@1"]["mean"], 1.0);
  EXPECT_TRUE(doc["compile"]["pass@1"]["sd"].is_null());
  EXPECT_EQ(doc["per_run"][0]["problems"][0]["compiled"], 1);
  EXPECT_NE(report.SummaryTable().find("compile pass@1"), std::string::npos);
  auto table = ComparisonTable({report, report});
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
}

TEST(SimulatorConfigTest, MissingExecutableIsAnEnvironmentError) {
  SimulatorConfig sim = SimulatorConfig::Icarus();
  sim.compile_command[0] = "definitely-not-a-simulator-binary";
  EXPECT_THROW(sim.CheckAvailable(), EnvironmentError);
  SimulatorConfig failing_check = SimulatorConfig::Verilator("/bin/false");
  failing_check.check_command = {"/bin/false"};
  EXPECT_THROW(failing_check.CheckAvailable(), EnvironmentError);
  EXPECT_TRUE(SimulatorConfig::Verilator().ToJson().contains("check_command"));
}

TEST(EvaluateTracesTest, EnvironmentErrorAbortsBeforeWork) {
  SimulatorConfig sim = SimulatorConfig::Icarus();
  sim.compile_command[0] = "definitely-not-a-simulator-binary";
  auto p = testing::FixtureProblem("xor_table");
  auto t = T("xor_table", 0, 0);
  t.final_verilog = "module top_module(input a, input b, output out); endmodule";
  EXPECT_THROW(EvaluateTraces({p}, {t}, sim), EnvironmentError);
}

class SimulationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto sim = testing::AvailableSimulator();
    if (!sim) GTEST_SKIP() << "no simulator";
    sim_ = *sim;
    sim_.scratch_root = testing::MakeTempDir("aot-eval-test");
  }
  void TearDown() override {
    if (!sim_.scratch_root.empty()) std::filesystem::remove_all(sim_.scratch_root);
  }
  SimulatorConfig sim_;
};

TEST_F(SimulationTest, ClassifiesCompileAndFunctionalOutcomes) {
  auto p = testing::FixtureProblem("xor_table");
  auto good = CheckSample(p, "module top_module(input a, input b, output out);\n  assign out = a ^ b;\nendmodule\n", sim_);
  EXPECT_TRUE(good.compiled) << good.log_excerpt;
  EXPECT_TRUE(good.functional) << good.log_excerpt;
  EXPECT_EQ(good.mismatches, 0);
  EXPECT_TRUE(good.scratch_dir.empty());

  auto wrong = CheckSample(p, "module top_module(input a, input b, output out);\n  assign out = a | b;\nendmodule\n", sim_);
  EXPECT_TRUE(wrong.compiled);
  EXPECT_FALSE(wrong.functional);
  EXPECT_EQ(wrong.mismatches, 3);

  auto broken = CheckSample(p, "module top_module(input a, input b, output out);\n  assign out = a ^ ;\nendmodule\n", sim_);
  EXPECT_FALSE(broken.compiled);
  EXPECT_FALSE(broken.functional);
  EXPECT_FALSE(broken.log_excerpt.empty());
  // Scratch directories are removed unless asked for.
  EXPECT_TRUE(std::filesystem::is_empty(sim_.scratch_root));
}

TEST_F(SimulationTest, TimeoutKillsTheSimulation) {
  DesignProblem p;
  p.task_id = "hang";
  p.module_header = "module top_module(output y);";
  p.testbench = "module tb;\n  wire y;\n  top_module dut(y);\n  initial forever #1;\nendmodule\n";
  sim_.timeout = std::chrono::seconds(2);
  auto out = CheckSample(p, "module top_module(output y);\n  assign y = 1'b0;\nendmodule\n", sim_);
  EXPECT_TRUE(out.compiled);
  EXPECT_TRUE(out.timed_out);
  EXPECT_FALSE(out.functional);
}

TEST_F(SimulationTest, MissingMismatchLineIsNotFunctional) {
  DesignProblem p;
  p.task_id = "silent";
  p.module_header = "module top_module(output y);";
  p.testbench = "module tb;\n  wire y;\n  top_module dut(y);\n  initial $finish;\nendmodule\n";
  auto out = CheckSample(p, "module top_module(output y);\n  assign y = 1'b0;\nendmodule\n", sim_);
  EXPECT_TRUE(out.compiled);
  EXPECT_FALSE(out.mismatches.has_value());
  EXPECT_FALSE(out.functional);
}

TEST_F(SimulationTest, KeepScratchRetainsFailures) {
  sim_.keep_scratch = true;
  auto p = testing::FixtureProblem("xor_table");
  auto out = CheckSample(p, "module top_module(input a, input b, output out);\n  assign out = 0;\nendmodule\n", sim_);
  EXPECT_FALSE(out.functional);
  ASSERT_FALSE(out.scratch_dir.empty());
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(out.scratch_dir) / "candidate.v"));
}

TEST_F(SimulationTest, EvaluateTracesSkipsFailedSamples) {
  auto p = testing::FixtureProblem("xor_table");
  auto ok = T("xor_table", 0, 0);
  ok.final_verilog = "module top_module(input a, input b, output out);\n  assign out = a ^ b;\nendmodule\n";
  auto failed = T("xor_table", 1, 0);
  failed.final_verilog = ok.final_verilog;
  failed.failed_stage = Stage::kFinal;
  auto missing = T("xor_table", 2, 0);
  sim_.workers = 2;
  auto outcomes = EvaluateTraces({p}, {ok, failed, missing}, sim_);
  ASSERT_EQ(outcomes.size(), 3u);
  EXPECT_TRUE(outcomes[0].functional);
  EXPECT_FALSE(outcomes[1].compiled);
  EXPECT_FALSE(outcomes[2].compiled);
  EXPECT_EQ(outcomes[1].sample_index, 1);
  EXPECT_EQ(outcomes[2].task_id, "xor_table");
}

}  // namespace
}  // namespace aot
