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

#include "aot/config.h"

#include <fmt/format.h>

#include <regex>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {

using nlohmann::json;

namespace {

const std::vector<std::string> kProviderKeys = {"type",          "base_url",        "api_key_env", "provider_model",
                                                "max_concurrency", "timeout_seconds"};

std::string JoinPath(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Merges `user` over `defaults`, reporting keys the defaults do not know.
void Merge(json& target, const json& user, const json& defaults, const std::string& prefix,
           std::vector<std::string>& problems) {
  if (!user.is_object()) {
    problems.push_back(fmt::format("{}: expected an object", prefix.empty() ? "<root>" : prefix));
    return;
  }
  for (const auto& [key, value] : user.items()) {
    std::string path = JoinPath(prefix, key);
    if (path == "models.providers") {
      if (!value.is_object()) {
        problems.push_back(path + ": expected an object keyed by model id");
        continue;
      }
      for (const auto& [model, provider] : value.items()) {
        std::string ppath = JoinPath(path, model);
        if (!provider.is_object()) {
          problems.push_back(ppath + ": expected an object");
          continue;
        }
        for (const auto& [pkey, pvalue] : provider.items()) {
          if (pkey == "api_key") {
            problems.push_back(JoinPath(ppath, pkey) +
                               ": API keys are not accepted in config files; set `api_key_env` to the name of an "
                               "environment variable");
          } else if (std::find(kProviderKeys.begin(), kProviderKeys.end(), pkey) == kProviderKeys.end()) {
            problems.push_back(JoinPath(ppath, pkey) + ": unknown key");
          }
        }
      }
      target[key] = value;
      continue;
    }
    auto it = defaults.find(key);
    if (it == defaults.end()) {
      problems.push_back(path + ": unknown key");
      continue;
    }
    if (it->is_object()) {
      Merge(target[key], value, *it, path, problems);
    } else {
      target[key] = value;
    }
  }
}

class Reader {
 public:
  Reader(const json& doc, std::vector<std::string>& problems) : doc_(doc), problems_(problems) {}

  const json* Find(const std::string& dotted) const {
    const json* node = &doc_;
    for (const auto& part : Split(dotted)) {
      if (!node->is_object()) return nullptr;
      auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    }
    return node;
  }

  template <typename T>
  std::optional<T> Optional(const std::string& key) {
    const json* node = Find(key);
    if (node == nullptr || node->is_null()) return std::nullopt;
    try {
      return node->get<T>();
    } catch (const json::exception&) {
      problems_.push_back(fmt::format("{}: unexpected value {}", key, node->dump()));
      return std::nullopt;
    }
  }

  template <typename T>
  T Get(const std::string& key, T fallback) {
    return Optional<T>(key).value_or(std::move(fallback));
  }

  void Problem(std::string message) { problems_.push_back(std::move(message)); }

 private:
  static std::vector<std::string> Split(const std::string& dotted) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t dot = dotted.find('.', start);
      parts.push_back(dotted.substr(start, dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return parts;
  }

  const json& doc_;
  std::vector<std::string>& problems_;
};

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

json DefaultConfigJson() {
  return {
      {"problems", {{"problem_file", nullptr}, {"description_file", nullptr}}},
      {"models",
       {{"abstraction", nullptr},
        {"translation", nullptr},
        {"mock", nullptr},
        {"cache_dir", nullptr},
        {"providers", json::object()},
        {"retry", {{"max_retries", 3}, {"initial_backoff_ms", 500}, {"multiplier", 2.0}, {"max_backoff_ms", 30000}}}}},
      {"strategy", {{"name", "aot"}, {"stages", "base+ir+pseudo"}}},
      {"sampling",
       {{"temperature", 0.6},
        {"top_p", 0.99},
        {"top_k", nullptr},
        {"max_output_tokens", nullptr},
        {"n", 5},
        {"runs", 5},
        {"k", {1}}}},
      {"simulator",
       {{"enabled", true},
        {"profile", "iverilog"},
        {"wrapper", "aot-vlsim"},
        {"compile_command", nullptr},
        {"run_command", nullptr},
        {"top", "tb"},
        {"timeout_seconds", 30},
        {"compile_timeout_seconds", 300},
        {"mismatch_regex", SimulatorConfig{}.mismatch_regex},
        {"workers", 1},
        {"keep_scratch", false},
        {"scratch_dir", nullptr}}},
      {"ir", {{"strict_truth_table", false}}},
      {"templates_dir", nullptr},
      {"output", {{"dir", "aot-out"}, {"workers", 1}}},
  };
}

void ApplyOverride(json& config, const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError({"empty override key"});
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = key.find('.', start);
    std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError({fmt::format("malformed override key `{}`", key)});
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(parsed);
}

ExperimentConfig ParseExperimentConfig(const json& config, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  json merged = DefaultConfigJson();
  Merge(merged, config, DefaultConfigJson(), "", problems);
  Reader r(merged, problems);
  ExperimentConfig out;
  out.effective = merged;

  if (auto p = r.Optional<std::string>("problems.problem_file")) {
    out.problem_file = Resolve(base_dir, *p);
  } else {
    r.Problem("problems.problem_file: required");
  }
  if (auto p = r.Optional<std::string>("problems.description_file")) out.description_file = Resolve(base_dir, *p);

  StrategyConfig& s = out.strategy;
  std::string name = r.Get<std::string>("strategy.name", "aot");
  if (auto parsed = ParseStrategy(name)) {
    s.strategy = *parsed;
  } else {
    r.Problem(fmt::format("strategy.name: unknown strategy `{}`", name));
  }
  try {
    s.aot_stages = ParseStageSet(r.Get<std::string>("strategy.stages", "base+ir+pseudo"));
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) r.Problem("strategy." + p);
  }
  s.abstraction_model = r.Get<std::string>("models.abstraction", "");
  s.translation_model = r.Get<std::string>("models.translation", "");
  if (s.abstraction_model.empty()) s.abstraction_model = s.translation_model;
  if (s.translation_model.empty()) s.translation_model = s.abstraction_model;
  s.temperature = r.Get<double>("sampling.temperature", 0.6);
  s.top_p = r.Get<double>("sampling.top_p", 0.99);
  s.top_k = r.Optional<int>("sampling.top_k");
  s.max_output_tokens = r.Optional<int>("sampling.max_output_tokens");
  s.samples_per_problem = r.Get<int>("sampling.n", 5);
  s.runs = r.Get<int>("sampling.runs", 5);
  if (const json* k = r.Find("sampling.k"); k != nullptr && k->is_number_integer()) {
    out.ks = {k->get<int>()};
  } else {
    out.ks = r.Get<std::vector<int>>("sampling.k", {1});
  }
  for (int k : out.ks) {
    if (k < 1 || k > s.samples_per_problem) {
      r.Problem(fmt::format("sampling.k: {} outside [1, sampling.n = {}]", k, s.samples_per_problem));
    }
  }
  if (s.strategy != Strategy::kSoT && s.strategy != Strategy::kToT) {
    try {
      s.Validate();
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) r.Problem(p);
    }
  }

  if (auto mock = r.Optional<std::string>("models.mock")) out.mock_script = Resolve(base_dir, *mock);
  if (auto cache = r.Optional<std::string>("models.cache_dir")) out.cache_dir = *cache;
  out.retry.max_retries = r.Get<int>("models.retry.max_retries", 3);
  out.retry.initial_backoff = std::chrono::milliseconds(r.Get<int>("models.retry.initial_backoff_ms", 500));
  out.retry.multiplier = r.Get<double>("models.retry.multiplier", 2.0);
  out.retry.max_backoff = std::chrono::milliseconds(r.Get<int>("models.retry.max_backoff_ms", 30000));
  if (out.retry.max_retries < 0) r.Problem("models.retry.max_retries: must be >= 0");

  if (const json* providers = r.Find("models.providers"); providers != nullptr && providers->is_object()) {
    for (const auto& [model, p] : providers->items()) {
      ProviderConfig pc;
      std::string prefix = "models.providers." + model + ".";
      pc.type = r.Get<std::string>(prefix + "type", pc.type);
      if (pc.type != "openai") r.Problem(fmt::format("{}type: unsupported provider type `{}`", prefix, pc.type));
      pc.base_url = r.Get<std::string>(prefix + "base_url", pc.base_url);
      pc.api_key_env = r.Get<std::string>(prefix + "api_key_env", pc.api_key_env);
      pc.provider_model = r.Get<std::string>(prefix + "provider_model", "");
      pc.max_concurrency = r.Get<int>(prefix + "max_concurrency", pc.max_concurrency);
      pc.timeout_seconds = r.Get<int>(prefix + "timeout_seconds", pc.timeout_seconds);
      if (pc.max_concurrency < 1) r.Problem(prefix + "max_concurrency: must be >= 1");
      out.providers[model] = pc;
      (void)p;
    }
  }
  if (!out.mock_script) {
    for (const auto* model : {&s.abstraction_model, &s.translation_model}) {
      if (!model->empty() && !out.providers.contains(*model)) {
        r.Problem(fmt::format("models.providers: no provider for model `{}` (or set models.mock)", *model));
      }
    }
  }

  out.evaluate = r.Get<bool>("simulator.enabled", true);
  std::string profile = r.Get<std::string>("simulator.profile", "iverilog");
  if (profile == "iverilog") {
    out.simulator = SimulatorConfig::Icarus();
  } else if (profile == "verilator") {
    out.simulator = SimulatorConfig::Verilator(r.Get<std::string>("simulator.wrapper", "aot-vlsim"));
  } else {
    r.Problem(fmt::format("simulator.profile: unknown profile `{}` (iverilog or verilator)", profile));
  }
  if (auto cmd = r.Optional<std::vector<std::string>>("simulator.compile_command")) {
    out.simulator.compile_command = *cmd;
    out.simulator.check_command.clear();
  }
  if (auto cmd = r.Optional<std::vector<std::string>>("simulator.run_command")) out.simulator.run_command = *cmd;
  if (out.simulator.compile_command.empty() || out.simulator.run_command.empty()) {
    r.Problem("simulator: compile_command and run_command must be non-empty");
  }
  out.simulator.top = r.Get<std::string>("simulator.top", "tb");
  out.simulator.timeout = std::chrono::seconds(r.Get<int>("simulator.timeout_seconds", 30));
  out.simulator.compile_timeout = std::chrono::seconds(r.Get<int>("simulator.compile_timeout_seconds", 300));
  if (out.simulator.timeout.count() <= 0) r.Problem("simulator.timeout_seconds: must be positive");
  out.simulator.mismatch_regex = r.Get<std::string>("simulator.mismatch_regex", out.simulator.mismatch_regex);
  try {
    std::regex check(out.simulator.mismatch_regex);
    if (check.mark_count() < 1) r.Problem("simulator.mismatch_regex: needs a capture group for the count");
  } catch (const std::regex_error& e) {
    r.Problem(fmt::format("simulator.mismatch_regex: {}", e.what()));
  }
  out.simulator.workers = r.Get<int>("simulator.workers", 1);
  out.simulator.keep_scratch = r.Get<bool>("simulator.keep_scratch", false);
  if (auto dir = r.Optional<std::string>("simulator.scratch_dir")) out.simulator.scratch_root = *dir;

  out.ir_options.strict_truth_table = r.Get<bool>("ir.strict_truth_table", false);
  if (auto dir = r.Optional<std::string>("templates_dir")) out.templates_dir = Resolve(base_dir, *dir);
  out.out_dir = r.Get<std::string>("output.dir", "aot-out");
  out.workers = r.Get<int>("output.workers", 1);
  if (out.workers < 1) r.Problem("output.workers: must be >= 1");

  if (!problems.empty()) throw ConfigError(std::move(problems));
  if (s.strategy == Strategy::kSoT || s.strategy == Strategy::kToT) s.Validate();
  return out;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = json::parse(ReadFile(path.string()), nullptr, false);
  if (doc.is_discarded()) throw ConfigError({fmt::format("{}: not valid JSON", path.string())});
  for (const auto& [key, value] : overrides) ApplyOverride(doc, key, value);
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return ParseExperimentConfig(doc, base);
}

std::shared_ptr<BackendRegistry> BuildBackends(const ExperimentConfig& config) {
  auto registry = std::make_shared<BackendRegistry>();
  auto wrap = [&](std::shared_ptr<Backend> backend, int concurrency) -> std::shared_ptr<Backend> {
    backend = std::make_shared<RetryingBackend>(std::move(backend), config.retry);
    backend = std::make_shared<ConcurrencyLimitedBackend>(std::move(backend), concurrency);
    if (config.cache_dir) backend = std::make_shared<CachingBackend>(std::move(backend), *config.cache_dir);
    return backend;
  };
  if (config.mock_script) {
    registry->SetFallback(wrap(MockBackend::FromFile(*config.mock_script), 4096));
    return registry;
  }
  std::set<std::string> models = {config.strategy.abstraction_model, config.strategy.translation_model};
  for (const auto& model : models) {
    const ProviderConfig& pc = config.providers.at(model);
    OpenAiOptions options;
    options.base_url = pc.base_url;
    options.api_key_env = pc.api_key_env;
    options.provider_model = pc.provider_model.empty() ? model : pc.provider_model;
    options.timeout = std::chrono::seconds(pc.timeout_seconds);
    registry->Register(model, wrap(std::make_shared<OpenAiBackend>(options), pc.max_concurrency));
  }
  return registry;
}

}  // namespace aot
