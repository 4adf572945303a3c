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

// The `aot` command-line tool: benchmark runs, ablations, IR utilities and
// the harness self-test.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aot/config.h"
#include "aot/errors.h"
#include "aot/eval.h"
#include "aot/extract.h"
#include "aot/ir.h"
#include "aot/kmap.h"
#include "aot/lower.h"
#include "aot/pipeline.h"
#include "aot/problem.h"
#include "aot/strings.h"
#include "aot/templates.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEnvironment = 3;

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Flags shared by `run` and `ablate`. Each maps onto a dotted config key.
struct ExperimentFlags {
  std::string config;
  std::string mock;
  std::string strategy;
  std::string stages;
  std::string abstraction_model;
  std::string translation_model;
  std::optional<int> n;
  std::optional<int> runs;
  std::vector<int> k;
  std::string out;
  bool keep_scratch = false;
  std::vector<std::string> sets;

  void Register(CLI::App* app) {
    app->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--mock", mock, "Scripted mock backend serving every model")->check(CLI::ExistingFile);
    app->add_option("--strategy", strategy, "baseline, one_shot, cot_explicit, cot_implicit or aot");
    app->add_option("--stages", stages, "AoT stage set, e.g. base+ir+pseudo");
    app->add_option("--abstraction-model", abstraction_model, "Model for classification, IR and pseudocode");
    app->add_option("--translation-model", translation_model, "Model for the final Verilog");
    app->add_option("--n", n, "Samples per problem");
    app->add_option("--runs", runs, "Independent runs");
    app->add_option("--k", k, "pass@k values to report");
    app->add_option("--out", out, "Output directory");
    app->add_flag("--debug-keep-scratch", keep_scratch, "Keep simulator scratch directories of failing samples");
    app->add_option("--set", sets, "Override a config key: --set sampling.temperature=0.2");
    app->allow_extras();
  }

  // Named flags first, then --set, then bare dotted flags (--a.b=v or --a.b v).
  Overrides Collect(const std::vector<std::string>& extras) const {
    Overrides o;
    if (!mock.empty()) o.emplace_back("models.mock", fs::absolute(mock).string());
    if (!strategy.empty()) o.emplace_back("strategy.name", strategy);
    if (!stages.empty()) o.emplace_back("strategy.stages", stages);
    if (!abstraction_model.empty()) o.emplace_back("models.abstraction", abstraction_model);
    if (!translation_model.empty()) o.emplace_back("models.translation", translation_model);
    if (n) o.emplace_back("sampling.n", std::to_string(*n));
    if (runs) o.emplace_back("sampling.runs", std::to_string(*runs));
    if (!k.empty()) o.emplace_back("sampling.k", nlohmann::json(k).dump());
    if (!out.empty()) o.emplace_back("output.dir", fs::absolute(out).string());
    if (keep_scratch) o.emplace_back("simulator.keep_scratch", "true");
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw aot::ConfigError({fmt::format("--set `{}`: expected key=value", s)});
      o.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    for (std::size_t i = 0; i < extras.size(); ++i) {
      const std::string& arg = extras[i];
      if (!arg.starts_with("--") || arg.find('.') == std::string::npos) {
        throw aot::ConfigError({fmt::format("unrecognised argument `{}`", arg)});
      }
      std::string body = arg.substr(2);
      auto eq = body.find('=');
      if (eq != std::string::npos) {
        o.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      } else if (i + 1 < extras.size()) {
        o.emplace_back(body, extras[++i]);
      } else {
        throw aot::ConfigError({fmt::format("flag `{}` has no value", arg)});
      }
    }
    return o;
  }
};

fs::path SelfDirectory() {
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::path(".") : exe.parent_path();
}

// Prefers the aot-vlsim wrapper installed next to this executable.
void LocateWrapper(aot::SimulatorConfig& sim) {
  fs::path sibling = SelfDirectory() / "aot-vlsim";
  if (!fs::exists(sibling)) return;
  for (auto* cmd : {&sim.compile_command, &sim.run_command, &sim.check_command}) {
    if (!cmd->empty() && cmd->front() == "aot-vlsim") cmd->front() = sibling.string();
  }
}

aot::ExperimentConfig LoadConfig(const ExperimentFlags& flags, const std::vector<std::string>& extras) {
  auto config = aot::LoadExperimentConfig(flags.config, flags.Collect(extras));
  LocateWrapper(config.simulator);
  return config;
}

void WriteJsonLines(const fs::path& path, const std::vector<nlohmann::json>& records) {
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  aot::WriteFile(path.string(), text);
}

// One benchmark + evaluation + scoring pass, written to `dir`.
aot::EvalReport RunExperiment(const aot::ExperimentConfig& config, const std::vector<aot::DesignProblem>& problems,
                              const fs::path& dir) {
  fs::create_directories(dir);
  std::optional<aot::TemplateLibrary> overridden;
  if (config.templates_dir) overridden = aot::TemplateLibrary::WithOverrides(*config.templates_dir);
  const aot::TemplateLibrary& templates = overridden ? *overridden : aot::TemplateLibrary::BuiltIn();
  auto backends = aot::BuildBackends(config);
  aot::Pipeline pipeline(config.strategy, *backends, templates, config.ir_options);

  if (config.evaluate) config.simulator.CheckAvailable();
  aot::TraceStore store(dir / "progress.jsonl", pipeline.ConfigHash());
  aot::BenchmarkOptions options;
  options.workers = config.workers;
  options.store = &store;
  options.progress = [](std::size_t done, std::size_t total) {
    if (done == total || done % 50 == 0) spdlog::info("{}/{} samples", done, total);
  };
  std::vector<aot::AbstractionTrace> traces = aot::RunBenchmark(problems, pipeline, options);

  std::vector<nlohmann::json> trace_lines;
  for (const auto& t : traces) trace_lines.push_back(aot::ToJson(t, pipeline.ConfigHash()));
  WriteJsonLines(dir / "traces.jsonl", trace_lines);

  std::vector<aot::SampleOutcome> outcomes;
  if (config.evaluate) {
    outcomes = aot::EvaluateTraces(problems, traces, config.simulator);
  } else {
    for (const auto& t : traces) {
      aot::SampleOutcome o;
      o.task_id = t.task_id;
      o.sample_index = t.sample_index;
      o.run_index = t.run_index;
      o.log_excerpt = "simulation disabled";
      outcomes.push_back(std::move(o));
    }
  }
  std::vector<nlohmann::json> outcome_lines;
  for (const auto& o : outcomes) outcome_lines.push_back(aot::ToJson(o));
  WriteJsonLines(dir / "outcomes.jsonl", outcome_lines);

  aot::EvalReport report = aot::ScoreRun(traces, outcomes, config.strategy, config.ks);
  report.config["evaluated"] = config.evaluate;
  if (config.evaluate) report.config["simulator"] = config.simulator.ToJson();
  aot::WriteFile((dir / "report.json").string(), report.ToJson().dump(2) + "\n");
  return report;
}

std::vector<aot::DesignProblem> LoadProblemsFor(const aot::ExperimentConfig& config) {
  aot::Diagnostics diagnostics;
  auto problems = aot::LoadProblems(config.problem_file, config.description_file, &diagnostics);
  for (const auto& w : diagnostics.warnings) spdlog::warn("{}", w);
  return problems;
}

int CmdRun(const ExperimentFlags& flags, const std::vector<std::string>& extras) {
  auto config = LoadConfig(flags, extras);
  auto problems = LoadProblemsFor(config);
  auto report = RunExperiment(config, problems, config.out_dir);
  std::cout << report.SummaryTable();
  if (!config.evaluate) std::cout << "simulator disabled: compile and functional rates were not measured\n";
  spdlog::info("report written to {}", (config.out_dir / "report.json").string());
  return kExitOk;
}

int CmdAblate(const ExperimentFlags& flags, const std::vector<std::string>& extras) {
  auto config = LoadConfig(flags, extras);
  auto problems = LoadProblemsFor(config);
  if (problems.empty()) throw aot::ConfigError({"problems: the ablation needs at least one problem"});
  std::vector<aot::EvalReport> reports;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& stages : aot::AblationStageSets()) {
    aot::ExperimentConfig variant = config;
    variant.strategy.strategy = aot::Strategy::kAoT;
    variant.strategy.aot_stages = stages;
    std::string name = aot::FormatStageSet(stages);
    spdlog::info("ablation: {}", name);
    reports.push_back(RunExperiment(variant, problems, config.out_dir / "ablate" / name));
    rows.push_back(reports.back().ToJson());
  }
  std::string table = aot::ComparisonTable(reports);
  aot::WriteFile((config.out_dir / "ablation.json").string(), rows.dump(2) + "\n");
  aot::WriteFile((config.out_dir / "ablation.txt").string(), table);
  std::cout << table;
  if (!config.evaluate) std::cout << "simulator disabled: compile and functional rates were not measured\n";
  return kExitOk;
}

// Raw text is kept so repeated keys are still reported by the IR parser.
struct IrInput {
  std::string text;
  nlohmann::json doc;
};

IrInput ReadIrInput(const std::string& path) {
  IrInput in{aot::ReadFile(path), {}};
  in.doc = nlohmann::json::parse(in.text, nullptr, false);
  if (in.doc.is_discarded()) throw aot::ParseError(path, 0, "not valid JSON");
  return in;
}

aot::Classification2 ClassificationFor(const nlohmann::json& doc, const std::string& given) {
  if (given.empty()) return aot::ir::DetectClassification(doc);
  auto c2 = aot::ParseClassification2(given);
  if (!c2) throw aot::ConfigError({fmt::format("--classification: unknown value `{}`", given)});
  return *c2;
}

void PrintDiagnostics(const aot::Diagnostics& diagnostics) {
  for (const auto& w : diagnostics.warnings) std::cerr << "warning: " << w << "\n";
}

void Emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    aot::WriteFile(out, text);
  }
}

struct IrFlags {
  std::string input;
  std::string header;
  std::string classification;
  std::string out;
  bool strict = false;
};

int CmdIrValidate(const IrFlags& f) {
  auto in = ReadIrInput(f.input);
  aot::Diagnostics diagnostics;
  auto c2 = ClassificationFor(in.doc, f.classification);
  aot::ir::ParseIr(std::string_view(in.text), c2, {f.strict}, &diagnostics);
  PrintDiagnostics(diagnostics);
  std::cout << fmt::format("{}: valid {} IR\n", f.input, aot::ToString(c2));
  return kExitOk;
}

int CmdIrLower(const IrFlags& f) {
  auto in = ReadIrInput(f.input);
  aot::Diagnostics diagnostics;
  auto ir = aot::ir::ParseIr(std::string_view(in.text), ClassificationFor(in.doc, f.classification), {f.strict}, &diagnostics);
  std::string verilog = aot::LowerToVerilog(ir, aot::ReadFile(f.header), &diagnostics);
  PrintDiagnostics(diagnostics);
  Emit(f.out, verilog);
  return kExitOk;
}

int CmdIrMinimize(const IrFlags& f) {
  auto in = ReadIrInput(f.input);
  aot::Diagnostics diagnostics;
  auto ir = aot::ir::ParseIr(std::string_view(in.text), aot::Classification2::kKMap, {}, &diagnostics);
  PrintDiagnostics(diagnostics);
  auto eqns = aot::MinimizeKMap(std::get<aot::ir::KMapIr>(ir.body));
  aot::ir::IntermediateRep out{aot::Classification2::kBooleanExpression, eqns};
  Emit(f.out, aot::ir::ToJson(out).dump(2) + "\n");
  return kExitOk;
}

struct SelftestFlags {
  std::string problems;
  std::string descriptions;
  std::string profile = "verilator";
  int timeout = 30;
  int workers = 1;
  bool keep_scratch = false;
  double min_pass_rate = 0.0;
};

// Runs every canonical solution through the simulator.
int CmdSelftest(const SelftestFlags& f) {
  aot::Diagnostics diagnostics;
  std::optional<fs::path> descriptions;
  if (!f.descriptions.empty()) descriptions = f.descriptions;
  auto problems = aot::LoadProblems(f.problems, descriptions, &diagnostics, {.require_descriptions = false});
  aot::SimulatorConfig sim =
      f.profile == "iverilog" ? aot::SimulatorConfig::Icarus() : aot::SimulatorConfig::Verilator();
  LocateWrapper(sim);
  sim.timeout = std::chrono::seconds(f.timeout);
  sim.keep_scratch = f.keep_scratch;
  sim.workers = f.workers;
  sim.CheckAvailable();

  std::vector<aot::AbstractionTrace> traces;
  for (const auto& p : problems) {
    if (!p.canonical_solution) continue;
    aot::AbstractionTrace t;
    t.task_id = p.task_id;
    t.final_verilog = aot::AssembleCandidate(p, *p.canonical_solution);
    traces.push_back(std::move(t));
  }
  auto outcomes = aot::EvaluateTraces(problems, traces, sim);
  std::size_t passed = 0;
  for (const auto& o : outcomes) {
    if (o.functional) {
      ++passed;
    } else {
      std::cout << fmt::format("FAIL {} (compiled={}, timed_out={})\n", o.task_id, o.compiled, o.timed_out);
    }
  }
  double rate = outcomes.empty() ? 0.0 : static_cast<double>(passed) / outcomes.size();
  std::cout << fmt::format("{}/{} canonical solutions pass ({:.1f}%)\n", passed, outcomes.size(), 100 * rate);
  return rate + 1e-12 >= f.min_pass_rate ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abstractions-of-Thought Verilog generation harness"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  ExperimentFlags run_flags;
  auto* run = app.add_subcommand("run", "Generate, simulate and score one configuration");
  run_flags.Register(run);

  ExperimentFlags ablate_flags;
  auto* ablate = app.add_subcommand("ablate", "Run the six abstraction-layer combinations");
  ablate_flags.Register(ablate);

  auto* ir = app.add_subcommand("ir", "Intermediate representation tools");
  ir->require_subcommand(1);
  IrFlags ir_flags;
  auto* validate = ir->add_subcommand("validate", "Check an IR file and list every violation");
  validate->add_option("input", ir_flags.input, "IR JSON")->required()->check(CLI::ExistingFile);
  auto* lower = ir->add_subcommand("lower", "Lower an IR file to a Verilog module");
  lower->add_option("input", ir_flags.input, "IR JSON")->required()->check(CLI::ExistingFile);
  lower->add_option("header", ir_flags.header, "Verilog module header")->required()->check(CLI::ExistingFile);
  auto* minimize = ir->add_subcommand("minimize", "Minimise a K-map IR to Boolean equations");
  minimize->add_option("input", ir_flags.input, "K-map IR JSON")->required()->check(CLI::ExistingFile);
  for (auto* sub : {validate, lower}) {
    sub->add_option("--classification", ir_flags.classification, "IR kind; detected from the keys by default");
    sub->add_flag("--strict", ir_flags.strict, "Truth tables must list every input row");
  }
  for (auto* sub : {lower, minimize}) sub->add_option("-o,--output", ir_flags.out, "Output file (default stdout)");

  SelftestFlags self_flags;
  auto* selftest = app.add_subcommand("selftest", "Simulate every canonical solution of a problem set");
  selftest->add_option("--problems", self_flags.problems, "Problem file (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  selftest->add_option("--descriptions", self_flags.descriptions, "Description file")->check(CLI::ExistingFile);
  selftest->add_option("--profile", self_flags.profile, "iverilog or verilator")
      ->check(CLI::IsMember({"iverilog", "verilator"}));
  selftest->add_option("--timeout", self_flags.timeout, "Per-sample simulation timeout in seconds");
  selftest->add_option("--workers", self_flags.workers, "Concurrent simulations");
  selftest->add_option("--min-pass-rate", self_flags.min_pass_rate, "Exit nonzero below this fraction");
  selftest->add_flag("--debug-keep-scratch", self_flags.keep_scratch, "Keep scratch directories of failures");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  try {
    if (*run) return CmdRun(run_flags, run->remaining());
    if (*ablate) return CmdAblate(ablate_flags, ablate->remaining());
    if (*validate) return CmdIrValidate(ir_flags);
    if (*lower) return CmdIrLower(ir_flags);
    if (*minimize) return CmdIrMinimize(ir_flags);
    if (*selftest) return CmdSelftest(self_flags);
  } catch (const aot::ConfigError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kExitConfig;
  } catch (const aot::ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << v.kind << ": " << v.message << "\n";
    return kExitInvalid;
  } catch (const aot::EnvironmentError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const aot::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const aot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
