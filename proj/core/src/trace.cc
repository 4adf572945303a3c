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

#include "aot/trace.h"

#include <fmt/format.h>

#include "aot/errors.h"

namespace aot {

using nlohmann::json;

std::int64_t AbstractionTrace::TotalInputTokens() const {
  std::int64_t total = 0;
  for (const auto& r : stage_records) total += r.input_tokens;
  return total;
}

std::int64_t AbstractionTrace::TotalOutputTokens() const {
  std::int64_t total = 0;
  for (const auto& r : stage_records) total += r.output_tokens;
  return total;
}

std::int64_t AbstractionTrace::AbstractionOutputTokens() const {
  std::int64_t total = 0;
  for (const auto& r : stage_records) {
    if (r.stage == Stage::kCls1 || r.stage == Stage::kCls2 || r.stage == Stage::kIr ||
        r.stage == Stage::kPseudocode) {
      total += r.output_tokens;
    }
  }
  return total;
}

json ToJson(const AbstractionTrace& trace, std::string_view config_hash) {
  json j;
  j["schema_version"] = kTraceSchemaVersion;
  j["config_hash"] = config_hash;
  j["task_id"] = trace.task_id;
  j["sample_index"] = trace.sample_index;
  j["run_index"] = trace.run_index;
  j["c1"] = trace.c1 ? json(ToString(*trace.c1)) : json(nullptr);
  j["c2"] = trace.c2 ? json(ToString(*trace.c2)) : json(nullptr);
  j["ir"] = trace.ir ? ir::ToJson(*trace.ir) : json(nullptr);
  j["pseudocode"] = trace.pseudocode ? json(*trace.pseudocode) : json(nullptr);
  j["reasoning"] = trace.reasoning ? json(*trace.reasoning) : json(nullptr);
  j["final_verilog"] = trace.final_verilog ? json(*trace.final_verilog) : json(nullptr);
  j["stage_records"] = json::array();
  for (const auto& r : trace.stage_records) {
    json rec = {{"stage", ToString(r.stage)},         {"prompt", r.prompt},
                {"response", r.response},             {"model_id", r.model_id},
                {"input_tokens", r.input_tokens},     {"output_tokens", r.output_tokens}};
    if (!r.error.empty()) rec["error"] = r.error;
    j["stage_records"].push_back(std::move(rec));
  }
  j["degradations"] = trace.degradations;
  j["failed_stage"] = trace.failed_stage ? json(ToString(*trace.failed_stage)) : json(nullptr);
  return j;
}

namespace {

template <typename T>
T Get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(key, "missing in trace record");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(key, e.what());
  }
}

bool Present(const json& j, const char* key) {
  auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

Stage StageFrom(const std::string& name) {
  auto s = ParseStage(name);
  if (!s) throw SchemaError("stage", fmt::format("unknown stage `{}`", name));
  return *s;
}

}  // namespace

AbstractionTrace TraceFromJson(const json& record) {
  if (!record.is_object()) throw SchemaError("", "trace record is not an object");
  if (Get<int>(record, "schema_version") != kTraceSchemaVersion) {
    throw SchemaError("schema_version", "unsupported trace schema version");
  }
  AbstractionTrace t;
  t.task_id = Get<std::string>(record, "task_id");
  t.sample_index = Get<int>(record, "sample_index");
  t.run_index = Get<int>(record, "run_index");
  if (Present(record, "c1")) {
    auto c1 = ParseClassification1(Get<std::string>(record, "c1"));
    if (!c1) throw SchemaError("c1", "unknown classification");
    t.c1 = c1;
  }
  if (Present(record, "c2")) {
    auto c2 = ParseClassification2(Get<std::string>(record, "c2"));
    if (!c2) throw SchemaError("c2", "unknown classification");
    t.c2 = c2;
  }
  if (Present(record, "ir")) {
    if (!t.c2) throw SchemaError("ir", "IR present without c2");
    t.ir = ir::ParseIr(record["ir"], *t.c2);
  }
  if (Present(record, "pseudocode")) t.pseudocode = Get<std::vector<std::string>>(record, "pseudocode");
  if (Present(record, "reasoning")) t.reasoning = Get<std::string>(record, "reasoning");
  if (Present(record, "final_verilog")) t.final_verilog = Get<std::string>(record, "final_verilog");
  for (const auto& r : Get<json>(record, "stage_records")) {
    StageRecord rec;
    rec.stage = StageFrom(Get<std::string>(r, "stage"));
    rec.prompt = Get<std::string>(r, "prompt");
    rec.response = Get<std::string>(r, "response");
    rec.model_id = Get<std::string>(r, "model_id");
    rec.input_tokens = Get<std::int64_t>(r, "input_tokens");
    rec.output_tokens = Get<std::int64_t>(r, "output_tokens");
    if (Present(r, "error")) rec.error = Get<std::string>(r, "error");
    t.stage_records.push_back(std::move(rec));
  }
  t.degradations = Get<std::vector<std::string>>(record, "degradations");
  if (Present(record, "failed_stage")) t.failed_stage = StageFrom(Get<std::string>(record, "failed_stage"));
  return t;
}

}  // namespace aot
