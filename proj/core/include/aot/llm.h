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

// Chat-completion backends: a scripted mock, an OpenAI-compatible HTTP
// client, and decorators for retries, caching and request concurrency.

#ifndef AOT_LLM_H_
#define AOT_LLM_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aot/errors.h"
#include "aot/strategy.h"

namespace aot {

// Identifies one logical model call.
struct RequestTag {
  std::string task_id;
  Stage stage = Stage::kFinal;
  int sample_index = 0;
  int run_index = 0;
  bool operator<(const RequestTag& o) const;
};

struct GenerationRequest {
  std::string model_id;
  std::string prompt;
  double temperature = 0.6;
  double top_p = 0.99;
  std::optional<int> top_k;
  std::optional<int> max_output_tokens;
  RequestTag tag;

  // Throws PreconditionError when a sampling parameter is out of range.
  void Validate() const;
};

struct GenerationResult {
  std::string text;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  std::string model_id;
  std::int64_t latency_ms = 0;
  bool cached = false;
};

enum class BackendErrorKind { kAuth, kRateLimit, kTransient, kMalformed, kNoScriptEntry, kUnknownModel };

std::string_view ToString(BackendErrorKind kind);
std::optional<BackendErrorKind> ParseBackendErrorKind(std::string_view name);

class BackendError : public Error {
 public:
  BackendError(BackendErrorKind kind, const std::string& what, std::string raw_payload = {});
  BackendErrorKind kind() const { return kind_; }
  bool retryable() const { return kind_ == BackendErrorKind::kRateLimit || kind_ == BackendErrorKind::kTransient; }
  // Provider payload for malformed responses.
  const std::string& raw_payload() const { return raw_payload_; }

 private:
  BackendErrorKind kind_;
  std::string raw_payload_;
};

// Implementations must be safe to call from many threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenerationResult Generate(const GenerationRequest& request) = 0;
};

// Replays canned responses from a script:
//
//   {"entries": [
//     {"match": {"stage": "cls1", "task_id": "counter"}, "text": "sequential"},
//     {"match": {"prompt_contains": "Pseudocode"}, "responses": ["...", "..."]},
//     {"match": {"stage": "final"}, "text": "...", "fail_first": 2, "error": "transient"}
//   ]}
//
// The first entry whose every matcher field agrees with the request wins.
// Matcher fields: stage, task_id, prompt_contains, model, sample_index,
// run_index. `responses` is indexed by sample_index (modulo its length).
// `fail_first` N makes the first N calls with a given request tag throw
// `error` (default transient); `error` without `fail_first` always throws.
// Token counts are whitespace-delimited token counts of prompt and reply.
class MockBackend : public Backend {
 public:
  // Throws ConfigError for malformed scripts.
  static std::shared_ptr<MockBackend> FromScript(const nlohmann::json& script);
  static std::shared_ptr<MockBackend> FromFile(const std::filesystem::path& path);

  GenerationResult Generate(const GenerationRequest& request) override;
  // Total Generate() calls, including failed ones.
  std::int64_t calls() const;

 private:
  struct Entry {
    std::optional<Stage> stage;
    std::optional<std::string> task_id;
    std::optional<std::string> prompt_contains;
    std::optional<std::string> model;
    std::optional<int> sample_index;
    std::optional<int> run_index;
    std::vector<std::string> responses;
    int fail_first = 0;
    std::optional<BackendErrorKind> error;
  };
  bool Matches(const Entry& e, const GenerationRequest& r) const;

  std::vector<Entry> entries_;
  mutable std::mutex mu_;
  std::int64_t calls_ = 0;
  std::map<std::pair<std::size_t, RequestTag>, int> failures_;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

// Retries retryable errors with exponential backoff. At most
// 1 + max_retries calls reach the inner backend per request.
class RetryingBackend : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;
  RetryingBackend(std::shared_ptr<Backend> inner, RetryPolicy policy, Sleeper sleeper = {});
  GenerationResult Generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<Backend> inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
};

// Content-addressed response cache on disk. The key covers model, prompt,
// sampling parameters, sample index and run index.
class CachingBackend : public Backend {
 public:
  CachingBackend(std::shared_ptr<Backend> inner, std::filesystem::path dir);
  GenerationResult Generate(const GenerationRequest& request) override;

  static std::string CacheKey(const GenerationRequest& request);

 private:
  std::filesystem::path PathFor(const std::string& key) const;

  std::shared_ptr<Backend> inner_;
  std::filesystem::path dir_;
  std::mutex write_mu_;
};

// Bounds the number of requests in flight to the inner backend.
class ConcurrencyLimitedBackend : public Backend {
 public:
  ConcurrencyLimitedBackend(std::shared_ptr<Backend> inner, int limit);
  GenerationResult Generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<Backend> inner_;
  std::counting_semaphore<4096> slots_;
};

struct OpenAiOptions {
  // e.g. "https://api.openai.com/v1"
  std::string base_url = "https://api.openai.com/v1";
  // Name of the environment variable holding the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  // Model name sent to the provider; defaults to the request's model id.
  std::string provider_model;
  std::chrono::seconds timeout{120};
};

// OpenAI-compatible /chat/completions client.
class OpenAiBackend : public Backend {
 public:
  // Throws BackendError(kAuth) when the key variable is unset.
  explicit OpenAiBackend(OpenAiOptions options);
  GenerationResult Generate(const GenerationRequest& request) override;

  // Maps a provider response (HTTP status and body) to a result or error.
  static GenerationResult ParseResponse(int status, const std::string& body, const std::string& model_id);

 private:
  OpenAiOptions options_;
  std::string api_key_;
};

// Model id -> backend.
class BackendRegistry {
 public:
  void Register(const std::string& model_id, std::shared_ptr<Backend> backend);
  // Used for model ids without their own registration.
  void SetFallback(std::shared_ptr<Backend> backend);
  // Throws BackendError(kUnknownModel).
  Backend& Get(const std::string& model_id) const;
  bool Has(const std::string& model_id) const;

 private:
  std::map<std::string, std::shared_ptr<Backend>> backends_;
  std::shared_ptr<Backend> fallback_;
};

}  // namespace aot

#endif  // AOT_LLM_H_
