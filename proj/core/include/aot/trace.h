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

// Per-sample record of every stage's prompt, response and parsed artifact.

#ifndef AOT_TRACE_H_
#define AOT_TRACE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aot/ir.h"
#include "aot/problem.h"
#include "aot/strategy.h"

namespace aot {

inline constexpr int kTraceSchemaVersion = 1;

struct StageRecord {
  Stage stage = Stage::kFinal;
  std::string prompt;
  std::string response;
  std::string model_id;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  // Non-empty when the request or the extraction of this attempt failed.
  std::string error;

  bool operator==(const StageRecord&) const = default;
};

struct AbstractionTrace {
  std::string task_id;
  int sample_index = 0;
  int run_index = 0;
  std::optional<Classification1> c1;
  std::optional<Classification2> c2;
  std::optional<ir::IntermediateRep> ir;
  std::optional<std::vector<std::string>> pseudocode;
  // Reasoning text of the implicit chain-of-thought strategy.
  std::optional<std::string> reasoning;
  std::optional<std::string> final_verilog;
  std::vector<StageRecord> stage_records;
  std::vector<std::string> degradations;
  // Set when the sample failed hard (backend error after retries, or no
  // module in the final response). The sample then scores as not compiling.
  std::optional<Stage> failed_stage;

  bool operator==(const AbstractionTrace&) const = default;

  std::int64_t TotalInputTokens() const;
  std::int64_t TotalOutputTokens() const;
  // Output tokens of the abstraction stages (classification, IR, pseudocode).
  std::int64_t AbstractionOutputTokens() const;
};

// One JSON object per trace. `config_hash` ties the record to the
// configuration that produced it, for resumption.
nlohmann::json ToJson(const AbstractionTrace& trace, std::string_view config_hash);
// Throws SchemaError on malformed records.
AbstractionTrace TraceFromJson(const nlohmann::json& record);

}  // namespace aot

#endif  // AOT_TRACE_H_
