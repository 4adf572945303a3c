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

#include "test_support.h"

#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot::testing {

std::filesystem::path FixturePath(const std::string& name) { return std::filesystem::path(AOT_FIXTURE_DIR) / name; }

std::string ReadFixture(const std::string& name) { return ReadFile(FixturePath(name).string()); }

std::vector<DesignProblem> FixtureProblems() {
  return LoadProblems(FixturePath("problems.jsonl"), FixturePath("descriptions.jsonl"));
}

DesignProblem FixtureProblem(const std::string& task_id) {
  for (auto& p : FixtureProblems()) {
    if (p.task_id == task_id) return p;
  }
  throw std::runtime_error("no fixture problem " + task_id);
}

std::string CheckGolden(const std::string& name, const std::string& actual) {
  std::filesystem::path path = std::filesystem::path(AOT_GOLDEN_DIR) / name;
  const char* update = std::getenv("AOT_UPDATE_GOLDENS");
  if (update != nullptr && std::string(update) == "1") {
    WriteFile(path.string(), actual);
    return "";
  }
  if (!std::filesystem::exists(path)) return fmt::format("missing golden {}", path.string());
  std::string expected = ReadFile(path.string());
  if (expected == actual) return "";
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  auto around = [i](const std::string& s) { return s.substr(i < 40 ? 0 : i - 40, 80); };
  return fmt::format("{} differs at byte {} (sizes {} vs {})\n--- golden: ...{}...\n--- actual: ...{}...",
                     name, i, expected.size(), actual.size(), around(expected), around(actual));
}

std::optional<SimulatorConfig> AvailableSimulator() {
  SimulatorConfig sim = SimulatorConfig::Verilator(AOT_VLSIM_PATH);
  try {
    sim.CheckAvailable();
  } catch (const EnvironmentError&) {
    return std::nullopt;
  }
  return sim;
}

std::string ExhaustiveBench(const std::vector<CombinationalCase>& cases) {
  std::string tb = "`timescale 1ns / 1ps\nmodule tb;\n  integer errors = 0;\n  integer samples = 0;\n  integer v;\n";
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    int width = 0;
    for (const auto& [name, w] : c.inputs) width += w;
    tb += fmt::format("  reg [{}:0] in_{};\n  wire [{}:0] out_{};\n", width - 1, k, c.output_width - 1, k);
    std::string ports;
    int hi = width - 1;
    for (const auto& [name, w] : c.inputs) {
      ports += fmt::format(".{}(in_{}[{}:{}]), ", name, k, hi, hi - w + 1);
      hi -= w;
    }
    tb += fmt::format("  {} dut_{} ({}.{}(out_{}));\n", c.module_name, k, ports, c.output, k);
  }
  tb += "  initial begin\n";
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    int width = 0;
    for (const auto& [name, w] : c.inputs) width += w;
    for (std::uint32_t v = 0; v < (1u << width); ++v) {
      tb += fmt::format("    in_{} = {}; #1; samples = samples + 1; if (out_{} !== {}'d{}) errors = errors + 1;\n", k,
                        v, k, c.output_width, c.expected(v));
    }
  }
  tb += "    $display(\"Mismatches: %1d in %1d samples\", errors, samples);\n    $finish;\n  end\nendmodule\n";
  return tb;
}

SampleOutcome SimulateCases(const std::vector<CombinationalCase>& cases, const SimulatorConfig& sim) {
  DesignProblem problem;
  problem.task_id = "exhaustive";
  problem.module_header = "module tb;";
  problem.testbench = ExhaustiveBench(cases);
  std::string candidate;
  for (const auto& c : cases) candidate += c.verilog + "\n";
  return CheckSample(problem, candidate, sim);
}

std::filesystem::path MakeTempDir(const std::string& prefix) {
  std::string pattern = (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  return pattern;
}

}  // namespace aot::testing
