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

#include "aot/pipeline.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <thread>

#include "aot/errors.h"
#include "aot/extract.h"
#include "aot/strings.h"

namespace aot {

using nlohmann::json;

StageSet AvailableStages(const StageSet& requested, const AbstractionTrace& trace) {
  StageSet out;
  for (AotStage s : requested) {
    switch (s) {
      case AotStage::kBase:
        out.insert(s);
        break;
      case AotStage::kIr:
        if (trace.c1 && trace.c2 && (*trace.c2 == Classification2::kOther || trace.ir)) out.insert(s);
        break;
      case AotStage::kPseudocode:
        if (trace.pseudocode) out.insert(s);
        break;
    }
  }
  return out;
}

// State of one sample while its stages run.
class Pipeline::SampleRun {
 public:
  SampleRun(const Pipeline& pipeline, const DesignProblem& problem, int sample_index, int run_index)
      : p_(pipeline), problem_(problem) {
    trace_.task_id = problem.task_id;
    trace_.sample_index = sample_index;
    trace_.run_index = run_index;
  }

  AbstractionTrace Run() {
    try {
      switch (p_.config_.strategy) {
        case Strategy::kAoT:
          RunAot();
          break;
        case Strategy::kCoTImplicitMultiModel:
          RunImplicitCoT();
          break;
        default:
          RunSingleShot();
          break;
      }
    } catch (const BackendError&) {
      // Already recorded on the stage that failed.
    }
    return std::move(trace_);
  }

 private:
  // Generates `prompt` and records the attempt. Backend errors mark the
  // trace failed at this stage and propagate.
  std::string Generate(const RenderedPrompt& prompt) {
    StageRecord record;
    record.stage = prompt.stage;
    record.prompt = prompt.text;
    record.model_id = p_.routing_.ModelFor(prompt.stage);
    GenerationRequest request;
    request.model_id = record.model_id;
    request.prompt = prompt.text;
    request.temperature = p_.config_.temperature;
    request.top_p = p_.config_.top_p;
    request.top_k = p_.config_.top_k;
    request.max_output_tokens = p_.config_.max_output_tokens;
    request.tag = {problem_.task_id, prompt.stage, trace_.sample_index, trace_.run_index};
    try {
      GenerationResult result = p_.backends_.Get(record.model_id).Generate(request);
      record.response = result.text;
      record.input_tokens = result.input_tokens;
      record.output_tokens = result.output_tokens;
      trace_.stage_records.push_back(std::move(record));
      return result.text;
    } catch (const BackendError& e) {
      record.error = e.what();
      record.response = e.raw_payload();
      trace_.stage_records.push_back(std::move(record));
      trace_.failed_stage = prompt.stage;
      spdlog::warn("{} sample {} run {}: {} failed: {}", problem_.task_id, trace_.sample_index, trace_.run_index,
                   ToString(prompt.stage), e.what());
      throw;
    }
  }

  // Generate-and-parse with one corrective re-prompt. Returns nullopt and
  // records a degradation when both attempts fail to parse.
  template <typename T, typename ParseFn>
  std::optional<T> GenerateParsed(const RenderedPrompt& prompt, ParseFn&& parse) {
    RenderedPrompt current = prompt;
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::string text = Generate(current);
      try {
        return parse(text);
      } catch (const Error& e) {
        trace_.stage_records.back().error = e.what();
        if (attempt == 0) {
          current = WithRepromptNote(prompt, e.what(), p_.templates_);
          continue;
        }
        trace_.degradations.push_back(fmt::format("{}: {}", ToString(prompt.stage), e.what()));
      }
    }
    return std::nullopt;
  }

  void RunAot() {
    const StageSet& stages = p_.config_.aot_stages;
    bool want_ir = stages.contains(AotStage::kIr);
    bool want_pseudo = stages.contains(AotStage::kPseudocode);
    if (want_ir || want_pseudo) Classify();
    if (want_ir && trace_.c1 && trace_.c2 && *trace_.c2 != Classification2::kOther) BuildIr();
    if (want_ir && !(trace_.c1 && trace_.c2)) trace_.degradations.push_back("ir: skipped without a classification");
    if (want_pseudo) BuildPseudocode();

    StageSet available = AvailableStages(stages, trace_);
    if (available.empty()) {
      trace_.degradations.push_back("final: no requested abstraction is available; using the base description");
      available = {AotStage::kBase};
    }
    Translate(RenderFinal(problem_, trace_, available, p_.templates_));
  }

  void Classify() {
    trace_.c1 = GenerateParsed<Classification1>(RenderCls1(problem_, p_.templates_), [](const std::string& text) {
      return *ParseClassification1(ExtractFinalWord(text, Classification1Vocabulary()));
    });
    if (!trace_.c1) return;
    auto cls2 = RenderCls2(problem_, *trace_.c1, p_.templates_);
    if (!cls2) {
      trace_.c2 = Classification2::kFsmImplied;
      return;
    }
    trace_.c2 = GenerateParsed<Classification2>(*cls2, [](const std::string& text) {
      return *ParseClassification2(ExtractFinalWord(text, Classification2Vocabulary()));
    });
  }

  void BuildIr() {
    Classification2 c2 = *trace_.c2;
    trace_.ir = GenerateParsed<ir::IntermediateRep>(
        RenderIr(problem_, *trace_.c1, c2, p_.templates_),
        [&](const std::string& text) { return ir::ParseIr(std::string_view(ExtractJsonBlock(text)), c2, p_.ir_options_); });
  }

  void BuildPseudocode() {
    const ir::IntermediateRep* ir = trace_.ir ? &*trace_.ir : nullptr;
    trace_.pseudocode = GenerateParsed<std::vector<std::string>>(
        RenderPseudocode(problem_, trace_.c1, trace_.c2, ir, p_.templates_),
        [](const std::string& text) { return ExtractPseudocode(text); });
  }

  // Final translation: no re-prompt; a response without the module is a
  // hard failure of the sample.
  void Translate(const RenderedPrompt& prompt) {
    std::string text = Generate(prompt);
    try {
      trace_.final_verilog = AssembleCandidate(problem_, text);
    } catch (const ExtractionError& e) {
      trace_.stage_records.back().error = e.what();
      trace_.failed_stage = prompt.stage;
    }
  }

  void RunSingleShot() { Translate(RenderComparison(problem_, p_.config_.strategy, p_.templates_)); }

  void RunImplicitCoT() {
    std::string reasoning = Generate(RenderComparison(problem_, Strategy::kCoTImplicitMultiModel, p_.templates_));
    trace_.reasoning = std::string(Trim(reasoning));
    Translate(RenderCoTFinal(problem_, *trace_.reasoning, p_.templates_));
  }

  const Pipeline& p_;
  const DesignProblem& problem_;
  AbstractionTrace trace_;
};

namespace {

std::vector<Stage> StagesUsed(const StrategyConfig& config) {
  switch (config.strategy) {
    case Strategy::kAoT: {
      std::vector<Stage> stages;
      if (config.aot_stages.contains(AotStage::kIr) || config.aot_stages.contains(AotStage::kPseudocode)) {
        stages = {Stage::kCls1, Stage::kCls2};
      }
      if (config.aot_stages.contains(AotStage::kIr)) stages.push_back(Stage::kIr);
      if (config.aot_stages.contains(AotStage::kPseudocode)) stages.push_back(Stage::kPseudocode);
      stages.push_back(Stage::kFinal);
      return stages;
    }
    case Strategy::kBaseline:
      return {Stage::kBaseline};
    case Strategy::kOneShot:
      return {Stage::kOneShot};
    case Strategy::kCoTExplicit:
      return {Stage::kCoT};
    case Strategy::kCoTImplicitMultiModel:
      return {Stage::kCoT, Stage::kFinal};
    default:
      return {};
  }
}

}  // namespace

Pipeline::Pipeline(StrategyConfig config, const BackendRegistry& backends, const TemplateLibrary& templates,
                   ir::ParseOptions ir_options)
    : config_(std::move(config)),
      routing_(StageRouting::From(config_)),
      backends_(backends),
      templates_(templates),
      ir_options_(ir_options) {
  config_.Validate();
  std::vector<std::string> missing;
  for (Stage stage : StagesUsed(config_)) {
    const std::string& model = routing_.ModelFor(stage);
    if (!backends_.Has(model)) missing.push_back(fmt::format("no backend for model `{}` ({})", model, ToString(stage)));
  }
  if (!missing.empty()) throw ConfigError(std::move(missing));
}

AbstractionTrace Pipeline::RunSample(const DesignProblem& problem, int sample_index, int run_index) const {
  return SampleRun(*this, problem, sample_index, run_index).Run();
}

std::string Pipeline::ConfigHash() const {
  json doc = {{"strategy", config_.ToJson()},
              {"strict_truth_table", ir_options_.strict_truth_table},
              {"trace_schema", kTraceSchemaVersion}};
  json tpl = json::object();
  for (const auto& name : templates_.Names()) tpl[name] = templates_.Get(name);
  doc["templates"] = std::move(tpl);
  return Sha256Hex(doc.dump());
}

TraceStore::TraceStore(std::filesystem::path path, std::string config_hash)
    : path_(std::move(path)), config_hash_(std::move(config_hash)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      json record = json::parse(line, nullptr, false);
      if (record.is_discarded()) {
        // A torn final line from an interrupted run.
        spdlog::warn("{}:{}: unreadable trace record skipped", path_.string(), line_no);
        continue;
      }
      if (record.value("config_hash", "") != config_hash_) continue;
      AbstractionTrace trace = TraceFromJson(record);
      Key key{trace.task_id, trace.sample_index, trace.run_index};
      completed_[key] = std::move(trace);
    }
  }
  out_.open(path_, std::ios::app);
  if (!out_) throw EnvironmentError(fmt::format("cannot open trace file {}", path_.string()));
}

void TraceStore::Append(const AbstractionTrace& trace) {
  std::string line = ToJson(trace, config_hash_).dump();
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  completed_[{trace.task_id, trace.sample_index, trace.run_index}] = trace;
}

std::vector<AbstractionTrace> RunBenchmark(const std::vector<DesignProblem>& problems, const Pipeline& pipeline,
                                           const BenchmarkOptions& options) {
  const int n = pipeline.config().samples_per_problem;
  const int runs = pipeline.config().runs;
  struct Unit {
    const DesignProblem* problem;
    int sample;
    int run;
  };
  std::vector<Unit> units;
  for (int run = 0; run < runs; ++run) {
    for (int sample = 0; sample < n; ++sample) {
      for (const auto& problem : problems) units.push_back({&problem, sample, run});
    }
  }
  std::vector<AbstractionTrace> traces(units.size());
  std::vector<bool> pending(units.size(), true);
  if (options.store) {
    const auto& done = options.store->completed();
    for (std::size_t i = 0; i < units.size(); ++i) {
      auto it = done.find({units[i].problem->task_id, units[i].sample, units[i].run});
      if (it != done.end()) {
        traces[i] = it->second;
        pending[i] = false;
      }
    }
  }
  std::size_t replayed = static_cast<std::size_t>(std::count(pending.begin(), pending.end(), false));
  if (replayed > 0) spdlog::info("replaying {} of {} traces from {}", replayed, units.size(), options.store->path().string());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{replayed};
  std::mutex progress_mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      if (!pending[i]) continue;
      const Unit& u = units[i];
      try {
        traces[i] = pipeline.RunSample(*u.problem, u.sample, u.run);
      } catch (const Error& e) {
        // Isolate problem-level failures (e.g. a template precondition).
        AbstractionTrace failed;
        failed.task_id = u.problem->task_id;
        failed.sample_index = u.sample;
        failed.run_index = u.run;
        failed.failed_stage = Stage::kFinal;
        failed.degradations.push_back(e.what());
        spdlog::error("{} sample {} run {}: {}", u.problem->task_id, u.sample, u.run, e.what());
        traces[i] = std::move(failed);
      }
      if (options.store) options.store->Append(traces[i]);
      std::size_t done = ++finished;
      if (options.progress) {
        std::lock_guard lock(progress_mu);
        options.progress(done, units.size());
      }
    }
  };
  int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return traces;
}

}  // namespace aot
