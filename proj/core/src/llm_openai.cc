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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <regex>

#include "aot/llm.h"

namespace aot {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

Endpoint SplitUrl(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) throw ConfigError({fmt::format("invalid base_url `{}`", url)});
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

}  // namespace

OpenAiBackend::OpenAiBackend(OpenAiOptions options) : options_(std::move(options)) {
  const char* key = std::getenv(options_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw BackendError(BackendErrorKind::kAuth,
                       fmt::format("environment variable {} is not set", options_.api_key_env));
  }
  api_key_ = key;
  SplitUrl(options_.base_url);
}

GenerationResult OpenAiBackend::ParseResponse(int status, const std::string& body, const std::string& model_id) {
  if (status == 401 || status == 403) {
    throw BackendError(BackendErrorKind::kAuth, fmt::format("HTTP {}", status), body);
  }
  if (status == 429) throw BackendError(BackendErrorKind::kRateLimit, "HTTP 429", body);
  if (status >= 500) throw BackendError(BackendErrorKind::kTransient, fmt::format("HTTP {}", status), body);
  if (status != 200) throw BackendError(BackendErrorKind::kMalformed, fmt::format("HTTP {}", status), body);
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw BackendError(BackendErrorKind::kMalformed, "response body is not a JSON object", body);
  }
  try {
    const json& message = doc.at("choices").at(0).at("message");
    GenerationResult result;
    result.text = message.at("content").is_null() ? "" : message.at("content").get<std::string>();
    if (auto usage = doc.find("usage"); usage != doc.end() && usage->is_object()) {
      result.input_tokens = usage->value("prompt_tokens", std::int64_t{0});
      result.output_tokens = usage->value("completion_tokens", std::int64_t{0});
    }
    result.model_id = model_id;
    return result;
  } catch (const json::exception& e) {
    throw BackendError(BackendErrorKind::kMalformed, e.what(), body);
  }
}

GenerationResult OpenAiBackend::Generate(const GenerationRequest& request) {
  request.Validate();
  Endpoint endpoint = SplitUrl(options_.base_url);
  json payload = {
      {"model", options_.provider_model.empty() ? request.model_id : options_.provider_model},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
  };
  if (request.top_k) payload["top_k"] = *request.top_k;
  if (request.max_output_tokens) payload["max_tokens"] = *request.max_output_tokens;

  httplib::Client client(endpoint.origin);
  auto seconds = static_cast<time_t>(options_.timeout.count());
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_write_timeout(seconds, 0);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  auto start = std::chrono::steady_clock::now();
  auto response = client.Post(endpoint.path + "/chat/completions", headers, payload.dump(), "application/json");
  if (!response) {
    throw BackendError(BackendErrorKind::kTransient,
                       fmt::format("request to {} failed: {}", endpoint.origin, httplib::to_string(response.error())));
  }
  GenerationResult result = ParseResponse(response->status, response->body, request.model_id);
  result.latency_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace aot
