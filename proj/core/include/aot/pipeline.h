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

// Per-sample orchestration of the abstraction stages and the comparison
// strategies, plus the benchmark loop with resumable trace persistence.

#ifndef AOT_PIPELINE_H_
#define AOT_PIPELINE_H_

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "aot/ir.h"
#include "aot/llm.h"
#include "aot/problem.h"
#include "aot/strategy.h"
#include "aot/templates.h"
#include "aot/trace.h"

namespace aot {

// Stages of `requested` whose artifacts are present in `trace`. Base is
// always available; IR needs the classification and, unless the
// classification is `other`, the IR itself.
StageSet AvailableStages(const StageSet& requested, const AbstractionTrace& trace);

class Pipeline {
 public:
  // Validates `config` and checks that every routed model is registered.
  Pipeline(StrategyConfig config, const BackendRegistry& backends,
           const TemplateLibrary& templates = TemplateLibrary::BuiltIn(), ir::ParseOptions ir_options = {});

  // Runs every stage for one (problem, sample, run). Backend and final
  // extraction failures are recorded in the trace, never thrown.
  AbstractionTrace RunSample(const DesignProblem& problem, int sample_index, int run_index) const;

  const StrategyConfig& config() const { return config_; }
  const StageRouting& routing() const { return routing_; }
  const TemplateLibrary& templates() const { return templates_; }

  // Hash of everything that determines the traces: strategy config,
  // template texts and IR parse options.
  std::string ConfigHash() const;

 private:
  class SampleRun;

  StrategyConfig config_;
  StageRouting routing_;
  const BackendRegistry& backends_;
  const TemplateLibrary& templates_;
  ir::ParseOptions ir_options_;
};

// Append-only JSON Lines file of traces for one configuration. Records
// written under a different config hash are ignored on load.
class TraceStore {
 public:
  using Key = std::tuple<std::string, int, int>;  // task, sample, run

  TraceStore(std::filesystem::path path, std::string config_hash);

  // Traces already persisted for this configuration.
  const std::map<Key, AbstractionTrace>& completed() const { return completed_; }
  void Append(const AbstractionTrace& trace);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string config_hash_;
  std::map<Key, AbstractionTrace> completed_;
  std::mutex mu_;
  std::ofstream out_;
};

struct BenchmarkOptions {
  int workers = 1;
  TraceStore* store = nullptr;
  // Called after each finished unit with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

// n x runs traces per problem, ordered by run, then sample, then problem
// order. Units found in the store are replayed instead of re-run.
std::vector<AbstractionTrace> RunBenchmark(const std::vector<DesignProblem>& problems, const Pipeline& pipeline,
                                           const BenchmarkOptions& options = {});

}  // namespace aot

#endif  // AOT_PIPELINE_H_
