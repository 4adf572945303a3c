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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "aot/eval.h"
#include "aot/extract.h"
#include "aot/ir.h"
#include "aot/kmap.h"

namespace {

void BM_PassAtK(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double sum = 0;
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) sum += aot::PassAtK(n, c, k);
    }
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_PassAtK)->Arg(10)->Arg(100);

void BM_MinimumCover(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::vector<std::uint32_t> ones;
  std::vector<std::uint32_t> dont_cares;
  for (std::uint32_t m = 0; m < (1u << vars); ++m) {
    switch (rng() % 3) {
      case 0: ones.push_back(m); break;
      case 1: dont_cares.push_back(m); break;
      default: break;
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(aot::MinimumCover(vars, ones, dont_cares));
}
BENCHMARK(BM_MinimumCover)->DenseRange(2, 6);

std::string CounterResponse() {
  std::string text = "Here is the design.\n```verilog\nmodule top_module(input clk, input reset, output reg [3:0] q);\n";
  for (int i = 0; i < 50; ++i) text += "  // filler line " + std::to_string(i) + "\n";
  text += "  always @(posedge clk) q <= (reset || q == 10) ? 4'd1 : q + 4'd1;\nendmodule\n```\n";
  return text;
}

void BM_ExtractVerilogModule(benchmark::State& state) {
  const std::string text = CounterResponse();
  for (auto _ : state) benchmark::DoNotOptimize(aot::ExtractVerilogModule(text, "top_module"));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ExtractVerilogModule);

std::string FsmJson(int states) {
  std::string s = R"({"states": [)";
  for (int i = 0; i < states; ++i) s += (i ? ", " : "") + std::string("\"S") + std::to_string(i) + "\"";
  s += R"(], "transitions": [)";
  for (int i = 0; i < states; ++i) {
    if (i) s += ", ";
    s += "{\"from\": \"S" + std::to_string(i) + "\", \"to\": \"S0\", \"cond\": \"reset\"}, ";
    s += "{\"from\": \"S" + std::to_string(i) + "\", \"to\": \"S" + std::to_string((i + 1) % states) +
         "\", \"cond\": \"!reset\"}";
  }
  s += R"(], "outputs": [)";
  for (int i = 0; i < states; ++i) {
    s += (i ? ", " : "") + std::string("{\"state\": \"S") + std::to_string(i) + "\", \"signal\": \"q\", \"value\": " +
         std::to_string(i) + "}";
  }
  return s + "]}";
}

void BM_ParseFsmIr(benchmark::State& state) {
  const std::string text = FsmJson(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aot::ir::ParseIr(std::string_view(text), aot::Classification2::kFsmImplied));
  }
}
BENCHMARK(BM_ParseFsmIr)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
