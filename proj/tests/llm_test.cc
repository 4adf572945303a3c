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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.h"

namespace aot {
namespace {

using nlohmann::json;

GenerationRequest Request(Stage stage, const std::string& task = "t", int sample = 0, int run = 0) {
  GenerationRequest r;
  r.model_id = "m";
  r.prompt = "three word prompt";
  r.tag = {task, stage, sample, run};
  return r;
}

TEST(RequestTest, ValidateRanges) {
  auto r = Request(Stage::kFinal);
  EXPECT_NO_THROW(r.Validate());
  r.temperature = 2.5;
  EXPECT_THROW(r.Validate(), PreconditionError);
  r.temperature = 0;
  r.top_p = 0;
  EXPECT_THROW(r.Validate(), PreconditionError);
  r.top_p = 1;
  r.model_id.clear();
  EXPECT_THROW(r.Validate(), PreconditionError);
}

TEST(MockBackendTest, FirstMatchingEntryWins) {
  auto mock = MockBackend::FromScript(json::parse(R"({"entries": [
    {"match": {"stage": "cls1", "task_id": "a"}, "text": "sequential"},
    {"match": {"stage": "cls1"}, "text": "combinational"},
    {"match": {"prompt_contains": "word"}, "text": "fallback"}
  ]})"));
  EXPECT_EQ(mock->Generate(Request(Stage::kCls1, "a")).text, "sequential");
  EXPECT_EQ(mock->Generate(Request(Stage::kCls1, "b")).text, "combinational");
  EXPECT_EQ(mock->Generate(Request(Stage::kFinal)).text, "fallback");
  EXPECT_EQ(mock->calls(), 3);
}

TEST(MockBackendTest, ResponsesIndexedBySample) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "responses": ["r0", "r1"]}])"));
  EXPECT_EQ(mock->Generate(Request(Stage::kFinal, "t", 0)).text, "r0");
  EXPECT_EQ(mock->Generate(Request(Stage::kFinal, "t", 1)).text, "r1");
  EXPECT_EQ(mock->Generate(Request(Stage::kFinal, "t", 2)).text, "r0");
}

TEST(MockBackendTest, TokenCountsAreWhitespaceTokens) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "a b  c\nd"}])"));
  auto result = mock->Generate(Request(Stage::kFinal));
  EXPECT_EQ(result.input_tokens, 3);
  EXPECT_EQ(result.output_tokens, 4);
  EXPECT_EQ(result.model_id, "m");
}

TEST(MockBackendTest, NoMatchIsAnError) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {"stage": "ir"}, "text": "x"}])"));
  try {
    mock->Generate(Request(Stage::kFinal));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kNoScriptEntry);
    EXPECT_FALSE(e.retryable());
  }
}

TEST(MockBackendTest, FailFirstIsPerRequestTag) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "ok", "fail_first": 2}])"));
  EXPECT_THROW(mock->Generate(Request(Stage::kFinal, "a")), BackendError);
  EXPECT_THROW(mock->Generate(Request(Stage::kFinal, "a")), BackendError);
  EXPECT_EQ(mock->Generate(Request(Stage::kFinal, "a")).text, "ok");
  EXPECT_THROW(mock->Generate(Request(Stage::kFinal, "b")), BackendError);
}

TEST(MockBackendTest, MalformedScriptsListEveryProblem) {
  try {
    MockBackend::FromScript(json::parse(R"([{"match": {"stage": "bogus"}, "text": "x"}, {"match": {}}, 3])"));
    FAIL();
  } catch (const ConfigError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("entry 0"), std::string::npos);
    EXPECT_NE(what.find("entry 1"), std::string::npos);
    EXPECT_NE(what.find("entry 2"), std::string::npos);
  }
  EXPECT_THROW(MockBackend::FromScript(json::parse(R"({"other": []})")), ConfigError);
}

TEST(MockBackendTest, FixtureScriptLoads) {
  EXPECT_NO_THROW(MockBackend::FromFile(testing::FixturePath("mock_script.json")));
}

TEST(RetryingBackendTest, RetriesTransientErrorsWithBackoff) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "ok", "fail_first": 3, "error": "rate_limit"}])"));
  std::vector<std::chrono::milliseconds> sleeps;
  RetryPolicy policy{3, std::chrono::milliseconds(100), 2.0, std::chrono::milliseconds(250)};
  RetryingBackend retrying(mock, policy, [&](auto d) { sleeps.push_back(d); });
  EXPECT_EQ(retrying.Generate(Request(Stage::kFinal)).text, "ok");
  EXPECT_EQ(mock->calls(), 4);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                            std::chrono::milliseconds(200),
                                                            std::chrono::milliseconds(250)}));
}

TEST(RetryingBackendTest, GivesUpAfterMaxRetries) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "ok", "fail_first": 10}])"));
  RetryingBackend retrying(mock, RetryPolicy{2, std::chrono::milliseconds(1), 2.0, std::chrono::milliseconds(1)},
                           [](auto) {});
  EXPECT_THROW(retrying.Generate(Request(Stage::kFinal)), BackendError);
  EXPECT_EQ(mock->calls(), 3);
}

TEST(RetryingBackendTest, NonRetryableErrorsPassThrough) {
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "ok", "fail_first": 1, "error": "auth"}])"));
  RetryingBackend retrying(mock, RetryPolicy{}, [](auto) { FAIL() << "slept"; });
  try {
    retrying.Generate(Request(Stage::kFinal));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kAuth);
  }
  EXPECT_EQ(mock->calls(), 1);
}

TEST(CachingBackendTest, SecondCallIsServedFromDisk) {
  auto dir = testing::MakeTempDir("aot-cache");
  auto mock = MockBackend::FromScript(json::parse(R"([{"match": {}, "responses": ["a", "b"]}])"));
  CachingBackend cache(mock, dir);
  auto first = cache.Generate(Request(Stage::kFinal, "t", 1));
  EXPECT_FALSE(first.cached);
  auto second = cache.Generate(Request(Stage::kFinal, "t", 1));
  EXPECT_TRUE(second.cached);
  EXPECT_EQ(second.text, "b");
  EXPECT_EQ(second.output_tokens, first.output_tokens);
  EXPECT_EQ(mock->calls(), 1);
  // A different sample index is a different key.
  EXPECT_FALSE(cache.Generate(Request(Stage::kFinal, "t", 0)).cached);
  // A fresh decorator over the same directory sees the entries.
  CachingBackend reopened(mock, dir);
  EXPECT_TRUE(reopened.Generate(Request(Stage::kFinal, "t", 1)).cached);
  std::filesystem::remove_all(dir);
}

TEST(CachingBackendTest, KeyCoversSamplingParameters) {
  auto a = Request(Stage::kFinal);
  auto b = a;
  b.temperature = 0.7;
  auto c = a;
  c.tag.run_index = 1;
  auto d = a;
  d.tag.stage = Stage::kCls1;  // the stage is not part of the request content
  EXPECT_NE(CachingBackend::CacheKey(a), CachingBackend::CacheKey(b));
  EXPECT_NE(CachingBackend::CacheKey(a), CachingBackend::CacheKey(c));
  EXPECT_EQ(CachingBackend::CacheKey(a), CachingBackend::CacheKey(d));
  EXPECT_EQ(CachingBackend::CacheKey(a).size(), 64u);
}

class SlowBackend : public Backend {
 public:
  GenerationResult Generate(const GenerationRequest&) override {
    int now = ++in_flight;
    int seen = max_seen.load();
    while (now > seen && !max_seen.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --in_flight;
    return {};
  }
  std::atomic<int> in_flight{0};
  std::atomic<int> max_seen{0};
};

TEST(ConcurrencyLimitedBackendTest, BoundsRequestsInFlight) {
  auto slow = std::make_shared<SlowBackend>();
  ConcurrencyLimitedBackend limited(slow, 2);
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { limited.Generate(Request(Stage::kFinal)); });
  threads.clear();
  EXPECT_LE(slow->max_seen.load(), 2);
  EXPECT_GE(slow->max_seen.load(), 1);
}

TEST(OpenAiBackendTest, ParseResponseMapsStatusCodes) {
  std::string ok = R"({"choices": [{"message": {"content": "hello"}}], "usage": {"prompt_tokens": 7, "completion_tokens": 2}})";
  auto r = OpenAiBackend::ParseResponse(200, ok, "m");
  EXPECT_EQ(r.text, "hello");
  EXPECT_EQ(r.input_tokens, 7);
  EXPECT_EQ(r.output_tokens, 2);
  auto kind = [](int status, const std::string& body) {
    try {
      OpenAiBackend::ParseResponse(status, body, "m");
    } catch (const BackendError& e) {
      return e.kind();
    }
    return BackendErrorKind::kUnknownModel;
  };
  EXPECT_EQ(kind(401, "{}"), BackendErrorKind::kAuth);
  EXPECT_EQ(kind(403, "{}"), BackendErrorKind::kAuth);
  EXPECT_EQ(kind(429, "{}"), BackendErrorKind::kRateLimit);
  EXPECT_EQ(kind(503, "{}"), BackendErrorKind::kTransient);
  EXPECT_EQ(kind(400, "{}"), BackendErrorKind::kMalformed);
  EXPECT_EQ(kind(200, "not json"), BackendErrorKind::kMalformed);
  EXPECT_EQ(kind(200, R"({"choices": []})"), BackendErrorKind::kMalformed);
}

TEST(OpenAiBackendTest, MalformedKeepsRawPayload) {
  try {
    OpenAiBackend::ParseResponse(200, "garbage", "m");
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.raw_payload(), "garbage");
  }
}

TEST(OpenAiBackendTest, MissingKeyVariableIsAnAuthError) {
  OpenAiOptions options;
  options.api_key_env = "AOT_TEST_KEY_THAT_IS_NOT_SET";
  ::unsetenv(options.api_key_env.c_str());
  try {
    OpenAiBackend backend(options);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kAuth);
    EXPECT_NE(std::string(e.what()).find(options.api_key_env), std::string::npos);
  }
}

TEST(OpenAiBackendTest, UnreachableServerIsTransient) {
  ::setenv("AOT_TEST_KEY", "k", 1);
  OpenAiOptions options;
  options.api_key_env = "AOT_TEST_KEY";
  options.base_url = "http://127.0.0.1:9/v1";
  options.timeout = std::chrono::seconds(2);
  OpenAiBackend backend(options);
  try {
    backend.Generate(Request(Stage::kFinal));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendErrorKind::kTransient);
  }
}

TEST(BackendRegistryTest, LookupAndFallback) {
  BackendRegistry registry;
  auto a = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "a"}])"));
  auto b = MockBackend::FromScript(json::parse(R"([{"match": {}, "text": "b"}])"));
  registry.Register("model-a", a);
  EXPECT_TRUE(registry.Has("model-a"));
  EXPECT_FALSE(registry.Has("model-b"));
  EXPECT_THROW(registry.Get("model-b"), BackendError);
  registry.SetFallback(b);
  EXPECT_EQ(registry.Get("model-b").Generate(Request(Stage::kFinal)).text, "b");
  EXPECT_EQ(registry.Get("model-a").Generate(Request(Stage::kFinal)).text, "a");
}

}  // namespace
}  // namespace aot
