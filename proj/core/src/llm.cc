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

#include "aot/llm.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <thread>
#include <tuple>

#include "aot/strings.h"

namespace aot {

using nlohmann::json;

bool RequestTag::operator<(const RequestTag& o) const {
  return std::tie(task_id, stage, sample_index, run_index) <
         std::tie(o.task_id, o.stage, o.sample_index, o.run_index);
}

void GenerationRequest::Validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw PreconditionError(fmt::format("temperature {} outside [0, 2]", temperature));
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw PreconditionError(fmt::format("top_p {} outside (0, 1]", top_p));
  if (model_id.empty()) throw PreconditionError("request has no model id");
}

std::string_view ToString(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::kAuth:
      return "auth";
    case BackendErrorKind::kRateLimit:
      return "rate_limit";
    case BackendErrorKind::kTransient:
      return "transient";
    case BackendErrorKind::kMalformed:
      return "malformed";
    case BackendErrorKind::kNoScriptEntry:
      return "no_script_entry";
    case BackendErrorKind::kUnknownModel:
      return "unknown_model";
  }
  return "?";
}

std::optional<BackendErrorKind> ParseBackendErrorKind(std::string_view name) {
  for (auto k : {BackendErrorKind::kAuth, BackendErrorKind::kRateLimit, BackendErrorKind::kTransient,
                 BackendErrorKind::kMalformed, BackendErrorKind::kNoScriptEntry, BackendErrorKind::kUnknownModel}) {
    if (ToString(k) == name) return k;
  }
  return std::nullopt;
}

BackendError::BackendError(BackendErrorKind kind, const std::string& what, std::string raw_payload)
    : Error(fmt::format("{} error: {}", ToString(kind), what)), kind_(kind), raw_payload_(std::move(raw_payload)) {}

// ---------------------------------------------------------------------------
// MockBackend

std::shared_ptr<MockBackend> MockBackend::FromScript(const json& script) {
  const json* entries = &script;
  if (script.is_object()) {
    auto it = script.find("entries");
    if (it == script.end()) throw ConfigError({"mock script: missing `entries`"});
    entries = &*it;
  }
  if (!entries->is_array()) throw ConfigError({"mock script: `entries` is not an array"});
  auto backend = std::shared_ptr<MockBackend>(new MockBackend());
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < entries->size(); ++i) {
    const json& e = (*entries)[i];
    std::string where = fmt::format("mock script entry {}", i);
    if (!e.is_object()) {
      problems.push_back(where + ": not an object");
      continue;
    }
    Entry entry;
    try {
      json match = e.value("match", json::object());
      if (match.contains("stage")) {
        entry.stage = ParseStage(match["stage"].get<std::string>());
        if (!entry.stage) problems.push_back(where + ": unknown stage " + match["stage"].dump());
      }
      if (match.contains("task_id")) entry.task_id = match["task_id"].get<std::string>();
      if (match.contains("prompt_contains")) entry.prompt_contains = match["prompt_contains"].get<std::string>();
      if (match.contains("model")) entry.model = match["model"].get<std::string>();
      if (match.contains("sample_index")) entry.sample_index = match["sample_index"].get<int>();
      if (match.contains("run_index")) entry.run_index = match["run_index"].get<int>();
      if (e.contains("text")) entry.responses.push_back(e["text"].get<std::string>());
      if (e.contains("responses")) {
        for (const auto& r : e["responses"]) entry.responses.push_back(r.get<std::string>());
      }
      entry.fail_first = e.value("fail_first", 0);
      if (e.contains("error")) {
        entry.error = ParseBackendErrorKind(e["error"].get<std::string>());
        if (!entry.error) problems.push_back(where + ": unknown error kind " + e["error"].dump());
      } else if (entry.fail_first > 0) {
        entry.error = BackendErrorKind::kTransient;
      }
    } catch (const json::exception& ex) {
      problems.push_back(fmt::format("{}: {}", where, ex.what()));
      continue;
    }
    if (entry.responses.empty() && !(entry.error && entry.fail_first == 0)) {
      problems.push_back(where + ": no `text` or `responses`");
    }
    backend->entries_.push_back(std::move(entry));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return backend;
}

std::shared_ptr<MockBackend> MockBackend::FromFile(const std::filesystem::path& path) {
  json script;
  try {
    script = json::parse(ReadFile(path.string()));
  } catch (const json::parse_error& e) {
    throw ConfigError({fmt::format("mock script {}: {}", path.string(), e.what())});
  }
  return FromScript(script);
}

bool MockBackend::Matches(const Entry& e, const GenerationRequest& r) const {
  if (e.stage && *e.stage != r.tag.stage) return false;
  if (e.task_id && *e.task_id != r.tag.task_id) return false;
  if (e.model && *e.model != r.model_id) return false;
  if (e.sample_index && *e.sample_index != r.tag.sample_index) return false;
  if (e.run_index && *e.run_index != r.tag.run_index) return false;
  if (e.prompt_contains && r.prompt.find(*e.prompt_contains) == std::string::npos) return false;
  return true;
}

GenerationResult MockBackend::Generate(const GenerationRequest& request) {
  request.Validate();
  std::size_t index = entries_.size();
  {
    std::lock_guard lock(mu_);
    ++calls_;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (Matches(entries_[i], request)) {
        index = i;
        break;
      }
    }
    if (index == entries_.size()) {
      throw BackendError(BackendErrorKind::kNoScriptEntry,
                         fmt::format("no script entry for task `{}` stage `{}` sample {} run {}",
                                     request.tag.task_id, ToString(request.tag.stage), request.tag.sample_index,
                                     request.tag.run_index));
    }
    const Entry& e = entries_[index];
    if (e.error) {
      int& seen = failures_[{index, request.tag}];
      if (e.fail_first == 0 || seen < e.fail_first) {
        ++seen;
        throw BackendError(*e.error, fmt::format("scripted failure for task `{}` stage `{}`", request.tag.task_id,
                                                 ToString(request.tag.stage)));
      }
    }
  }
  const Entry& e = entries_[index];
  GenerationResult result;
  result.text = e.responses[static_cast<std::size_t>(request.tag.sample_index) % e.responses.size()];
  result.input_tokens = static_cast<std::int64_t>(CountWhitespaceTokens(request.prompt));
  result.output_tokens = static_cast<std::int64_t>(CountWhitespaceTokens(result.text));
  result.model_id = request.model_id;
  return result;
}

std::int64_t MockBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

// ---------------------------------------------------------------------------
// RetryingBackend

RetryingBackend::RetryingBackend(std::shared_ptr<Backend> inner, RetryPolicy policy, Sleeper sleeper)
    : inner_(std::move(inner)), policy_(policy), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

GenerationResult RetryingBackend::Generate(const GenerationRequest& request) {
  auto backoff = policy_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return inner_->Generate(request);
    } catch (const BackendError& e) {
      if (!e.retryable() || attempt >= policy_.max_retries) throw;
      spdlog::debug("{} [{} {}]: attempt {} failed ({}); retrying in {} ms", request.model_id, request.tag.task_id,
                    ToString(request.tag.stage), attempt + 1, e.what(), backoff.count());
      sleeper_(backoff);
      auto next = std::chrono::duration_cast<std::chrono::milliseconds>(backoff * policy_.multiplier);
      backoff = std::min(next, policy_.max_backoff);
    }
  }
}

// ---------------------------------------------------------------------------
// CachingBackend

CachingBackend::CachingBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string CachingBackend::CacheKey(const GenerationRequest& request) {
  json key = {
      {"model_id", request.model_id},
      {"prompt", request.prompt},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
      {"top_k", request.top_k ? json(*request.top_k) : json(nullptr)},
      {"max_output_tokens", request.max_output_tokens ? json(*request.max_output_tokens) : json(nullptr)},
      {"sample_index", request.tag.sample_index},
      {"run_index", request.tag.run_index},
  };
  return Sha256Hex(key.dump());
}

std::filesystem::path CachingBackend::PathFor(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

GenerationResult CachingBackend::Generate(const GenerationRequest& request) {
  std::string key = CacheKey(request);
  auto path = PathFor(key);
  if (std::filesystem::exists(path)) {
    try {
      json entry = json::parse(ReadFile(path.string()));
      GenerationResult r;
      r.text = entry.at("text").get<std::string>();
      r.input_tokens = entry.at("input_tokens").get<std::int64_t>();
      r.output_tokens = entry.at("output_tokens").get<std::int64_t>();
      r.model_id = entry.at("model_id").get<std::string>();
      r.cached = true;
      return r;
    } catch (const std::exception& e) {
      spdlog::warn("ignoring unreadable cache entry {}: {}", path.string(), e.what());
    }
  }
  GenerationResult result = inner_->Generate(request);
  json entry = {{"text", result.text},
                {"input_tokens", result.input_tokens},
                {"output_tokens", result.output_tokens},
                {"model_id", result.model_id}};
  {
    std::lock_guard lock(write_mu_);
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    WriteFile(tmp.string(), entry.dump());
    std::filesystem::rename(tmp, path);
  }
  return result;
}

// ---------------------------------------------------------------------------
// ConcurrencyLimitedBackend

ConcurrencyLimitedBackend::ConcurrencyLimitedBackend(std::shared_ptr<Backend> inner, int limit)
    : inner_(std::move(inner)), slots_(std::clamp(limit, 1, 4096)) {}

GenerationResult ConcurrencyLimitedBackend::Generate(const GenerationRequest& request) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<4096>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->Generate(request);
}

// ---------------------------------------------------------------------------
// BackendRegistry

void BackendRegistry::Register(const std::string& model_id, std::shared_ptr<Backend> backend) {
  backends_[model_id] = std::move(backend);
}

void BackendRegistry::SetFallback(std::shared_ptr<Backend> backend) { fallback_ = std::move(backend); }

Backend& BackendRegistry::Get(const std::string& model_id) const {
  auto it = backends_.find(model_id);
  if (it != backends_.end()) return *it->second;
  if (fallback_) return *fallback_;
  throw BackendError(BackendErrorKind::kUnknownModel, fmt::format("no backend registered for model `{}`", model_id));
}

bool BackendRegistry::Has(const std::string& model_id) const {
  return backends_.contains(model_id) || fallback_ != nullptr;
}

}  // namespace aot
