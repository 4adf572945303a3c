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

// Simulator-backed checking of generated modules, pass@k, and run reports.

#ifndef AOT_EVAL_H_
#define AOT_EVAL_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aot/problem.h"
#include "aot/strategy.h"
#include "aot/trace.h"

namespace aot {

// Commands are argv vectors; each element may contain the placeholders
// {dir} (scratch directory), {candidate}, {testbench} and {top}.
struct SimulatorConfig {
  std::vector<std::string> compile_command;
  std::vector<std::string> run_command;
  // Optional probe run by CheckAvailable; must exit 0 when the toolchain
  // behind the commands is usable.
  std::vector<std::string> check_command;
  std::string top = "tb";
  std::chrono::seconds timeout{30};
  std::chrono::seconds compile_timeout{300};
  std::string mismatch_regex = R"(Mismatches:\s*(\d+)\s+in\s+\d+\s+samples)";
  // Keep the scratch directory of failing samples.
  bool keep_scratch = false;
  std::filesystem::path scratch_root;  // empty: system temp directory
  int workers = 1;

  // iverilog -o {dir}/sim, then vvp.
  static SimulatorConfig Icarus();
  // The bundled aot-vlsim wrapper around Verilator.
  static SimulatorConfig Verilator(const std::string& wrapper = "aot-vlsim");

  // Throws EnvironmentError when a command's executable cannot be found or
  // the check command fails.
  void CheckAvailable() const;

  nlohmann::json ToJson() const;
};

struct SampleOutcome {
  std::string task_id;
  int sample_index = 0;
  int run_index = 0;
  bool compiled = false;
  bool functional = false;
  bool timed_out = false;
  std::optional<int> mismatches;
  std::string log_excerpt;
  std::int64_t wall_ms = 0;
  // Scratch directory, when retained.
  std::string scratch_dir;
};

nlohmann::json ToJson(const SampleOutcome& outcome);

// Compiles `verilog` with the problem's testbench and runs it.
SampleOutcome CheckSample(const DesignProblem& problem, const std::string& verilog, const SimulatorConfig& sim);

// One outcome per trace, in trace order. Traces without a final module
// score as not compiled without invoking the simulator. Throws
// EnvironmentError before any work when the simulator is missing.
std::vector<SampleOutcome> EvaluateTraces(const std::vector<DesignProblem>& problems,
                                          const std::vector<AbstractionTrace>& traces, const SimulatorConfig& sim);

// Unbiased pass@k estimator 1 - C(n-c, k) / C(n, k).
double PassAtK(int n, int c, int k);

struct MeanSd {
  double mean = 0;
  std::optional<double> sd;  // absent for a single value
};

// Arithmetic mean and sample standard deviation (n - 1).
MeanSd ComputeMeanSd(const std::vector<double>& values);

struct ProblemCounts {
  std::string task_id;
  int n = 0;
  int compiled = 0;
  int functional = 0;
};

struct RunScores {
  int run_index = 0;
  std::vector<ProblemCounts> problems;
  // Keyed by k; averages over problems, in [0, 1].
  std::map<int, double> compile_pass_at_k;
  std::map<int, double> functional_pass_at_k;
};

struct TokenStats {
  double avg_input = 0;
  double avg_output = 0;
  // Abstraction-stage output tokens / 3; AoT only.
  std::optional<double> per_abstraction;
  std::int64_t total_input = 0;
  std::int64_t total_output = 0;
};

struct EvalReport {
  std::string label;
  int n = 0;
  int runs = 0;
  std::vector<int> ks;
  std::vector<std::string> task_ids;
  std::vector<RunScores> per_run;
  std::map<int, MeanSd> compile_pass_at_k;
  std::map<int, MeanSd> functional_pass_at_k;
  TokenStats tokens;
  nlohmann::json config = nlohmann::json::object();

  nlohmann::json ToJson() const;
  std::string SummaryTable() const;
};

// Throws ReportError when `outcomes` does not cover `traces` or the sample
// counts are inconsistent.
EvalReport ScoreRun(const std::vector<AbstractionTrace>& traces, const std::vector<SampleOutcome>& outcomes,
                    const StrategyConfig& config, const std::vector<int>& ks = {1});

// One row per report, e.g. the six ablation configurations.
std::string ComparisonTable(const std::vector<EvalReport>& reports);

}  // namespace aot

#endif  // AOT_EVAL_H_
