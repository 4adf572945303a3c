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

#include "aot/eval.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <regex>
#include <thread>

#include "aot/errors.h"
#include "aot/strings.h"

namespace aot {

using nlohmann::json;

namespace {

constexpr std::size_t kExcerptChars = 2000;

bool IsExecutable(const std::filesystem::path& p) {
  return std::filesystem::is_regular_file(p) && ::access(p.c_str(), X_OK) == 0;
}

// Resolves argv[0] the way execvp would, so a missing tool is reported
// before anything is spawned.
std::optional<std::string> ResolveExecutable(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (IsExecutable(name)) return name;
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::string_view rest(path);
  while (true) {
    std::size_t colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    auto candidate = std::filesystem::path(dir.empty() ? "." : dir) / name;
    if (IsExecutable(candidate)) return candidate.string();
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

std::string Substitute(std::string text, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    std::string token = "{" + key + "}";
    for (std::size_t pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size())) {
      text.replace(pos, token.size(), value);
    }
  }
  return text;
}

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;
};

// Runs `argv` in its own process group with stdout and stderr sent to
// `log_path`. The whole group is killed on timeout.
ProcessResult RunProcess(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                         std::chrono::seconds timeout, const std::filesystem::path& log_path) {
  auto exe = ResolveExecutable(argv.at(0));
  if (!exe) throw EnvironmentError(fmt::format("executable `{}` not found", argv[0]));
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  std::string cwd_str = cwd.string();
  std::string log_str = log_path.string();

  pid_t pid = ::fork();
  if (pid < 0) throw EnvironmentError("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    int log = ::open(log_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int null_in = ::open("/dev/null", O_RDONLY);
    if (log < 0 || null_in < 0 || ::chdir(cwd_str.c_str()) != 0) ::_exit(126);
    ::dup2(null_in, 0);
    ::dup2(log, 1);
    ::dup2(log, 2);
    ::execv(exe->c_str(), args.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  ProcessResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  auto poll = std::chrono::milliseconds(2);
  int status = 0;
  while (true) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) throw EnvironmentError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(poll);
    poll = std::min(poll * 2, std::chrono::milliseconds(50));
  }
  ::kill(-pid, SIGKILL);  // stray children of the simulator
  if (!result.timed_out) {
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
  if (std::filesystem::exists(log_path)) result.output = ReadFile(log_str);
  return result;
}

std::string Excerpt(const std::string& log) {
  if (log.size() <= kExcerptChars) return log;
  return "..." + log.substr(log.size() - kExcerptChars);
}

std::filesystem::path MakeScratch(const SimulatorConfig& sim) {
  auto root = sim.scratch_root.empty() ? std::filesystem::temp_directory_path() / "aot-eval" : sim.scratch_root;
  std::filesystem::create_directories(root);
  std::string tmpl = (root / "sample-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) throw EnvironmentError(fmt::format("cannot create scratch in {}", root.string()));
  return tmpl;
}

double Percent(double v) { return 100.0 * v; }

std::string FormatMeanSd(const MeanSd& m) {
  if (!m.sd) return fmt::format("{:.2f}", Percent(m.mean));
  return fmt::format("{:.2f} ± {:.2f}", Percent(m.mean), Percent(*m.sd));
}

json MeanSdJson(const MeanSd& m) { return {{"mean", m.mean}, {"sd", m.sd ? json(*m.sd) : json(nullptr)}}; }

std::string ReportLabel(const StrategyConfig& config) {
  if (config.strategy == Strategy::kAoT) return fmt::format("aot[{}]", FormatStageSet(config.aot_stages));
  return std::string(ToString(config.strategy));
}

}  // namespace

SimulatorConfig SimulatorConfig::Icarus() {
  SimulatorConfig sim;
  sim.compile_command = {"iverilog", "-g2012", "-o", "{dir}/sim", "-s", "{top}", "{candidate}", "{testbench}"};
  sim.run_command = {"vvp", "-n", "{dir}/sim"};
  return sim;
}

SimulatorConfig SimulatorConfig::Verilator(const std::string& wrapper) {
  SimulatorConfig sim;
  sim.compile_command = {wrapper, "compile", "{dir}", "{top}", "{candidate}", "{testbench}"};
  sim.run_command = {wrapper, "run", "{dir}"};
  sim.check_command = {wrapper, "check"};
  return sim;
}

void SimulatorConfig::CheckAvailable() const {
  for (const auto* cmd : {&compile_command, &run_command}) {
    if (cmd->empty()) throw EnvironmentError("simulator command is empty");
    const std::string& exe = cmd->front();
    if (exe.find('{') != std::string::npos) continue;  // built in the scratch directory
    if (!ResolveExecutable(exe)) throw EnvironmentError(fmt::format("simulator executable `{}` not found", exe));
  }
  if (timeout.count() <= 0) throw EnvironmentError("simulation timeout must be positive");
  if (check_command.empty()) return;
  std::filesystem::path dir = MakeScratch(*this);
  ProcessResult probe = RunProcess(check_command, dir, std::chrono::seconds(60), dir / "check.log");
  std::filesystem::remove_all(dir);
  if (probe.exit_code != 0) {
    throw EnvironmentError(fmt::format("simulator check `{}` failed: {}", Join(check_command, " "),
                                       std::string(Trim(probe.output))));
  }
}

json SimulatorConfig::ToJson() const {
  return {{"compile_command", compile_command},
          {"run_command", run_command},
          {"check_command", check_command},
          {"top", top},
          {"timeout_seconds", timeout.count()},
          {"compile_timeout_seconds", compile_timeout.count()},
          {"mismatch_regex", mismatch_regex}};
}

json ToJson(const SampleOutcome& o) {
  json doc = {{"task_id", o.task_id},
              {"sample_index", o.sample_index},
              {"run_index", o.run_index},
              {"compiled", o.compiled},
              {"functional", o.functional},
              {"timed_out", o.timed_out},
              {"mismatches", o.mismatches ? json(*o.mismatches) : json(nullptr)},
              {"wall_ms", o.wall_ms},
              {"log_excerpt", o.log_excerpt}};
  if (!o.scratch_dir.empty()) doc["scratch_dir"] = o.scratch_dir;
  return doc;
}

SampleOutcome CheckSample(const DesignProblem& problem, const std::string& verilog, const SimulatorConfig& sim) {
  if (Trim(verilog).empty()) throw PreconditionError(fmt::format("task `{}`: empty candidate", problem.task_id));
  auto start = std::chrono::steady_clock::now();
  SampleOutcome outcome;
  outcome.task_id = problem.task_id;
  auto dir = MakeScratch(sim);
  auto candidate = dir / "candidate.v";
  auto testbench = dir / "testbench.v";
  WriteFile(candidate.string(), verilog);
  WriteFile(testbench.string(), problem.testbench);
  std::map<std::string, std::string> values = {
      {"dir", dir.string()}, {"candidate", candidate.string()}, {"testbench", testbench.string()}, {"top", sim.top}};
  auto expand = [&](const std::vector<std::string>& argv) {
    std::vector<std::string> out;
    for (const auto& a : argv) out.push_back(Substitute(a, values));
    return out;
  };

  ProcessResult compile = RunProcess(expand(sim.compile_command), dir, sim.compile_timeout, dir / "compile.log");
  outcome.compiled = !compile.timed_out && compile.exit_code == 0;
  if (!outcome.compiled) {
    outcome.timed_out = compile.timed_out;
    outcome.log_excerpt = Excerpt(compile.output);
  } else {
    ProcessResult run = RunProcess(expand(sim.run_command), dir, sim.timeout, dir / "run.log");
    outcome.timed_out = run.timed_out;
    outcome.log_excerpt = Excerpt(run.output);
    std::regex pattern(sim.mismatch_regex);
    for (auto it = std::sregex_iterator(run.output.begin(), run.output.end(), pattern); it != std::sregex_iterator();
         ++it) {
      if (it->size() > 1) outcome.mismatches = std::stoi((*it)[1].str());
    }
    outcome.functional = !run.timed_out && run.exit_code == 0 && outcome.mismatches == 0;
  }
  outcome.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (outcome.functional || !sim.keep_scratch) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  } else {
    outcome.scratch_dir = dir.string();
  }
  return outcome;
}

std::vector<SampleOutcome> EvaluateTraces(const std::vector<DesignProblem>& problems,
                                          const std::vector<AbstractionTrace>& traces, const SimulatorConfig& sim) {
  sim.CheckAvailable();
  std::map<std::string, const DesignProblem*> by_id;
  for (const auto& p : problems) by_id[p.task_id] = &p;
  for (const auto& t : traces) {
    if (!by_id.contains(t.task_id)) throw PreconditionError(fmt::format("trace for unknown task `{}`", t.task_id));
  }
  std::vector<SampleOutcome> outcomes(traces.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (!abort) {
      std::size_t i = next.fetch_add(1);
      if (i >= traces.size()) return;
      const AbstractionTrace& t = traces[i];
      SampleOutcome& o = outcomes[i];
      try {
        if (t.final_verilog && !t.failed_stage) {
          o = CheckSample(*by_id.at(t.task_id), *t.final_verilog, sim);
        } else {
          o.log_excerpt = fmt::format("no module to simulate (failed at {})",
                                      t.failed_stage ? ToString(*t.failed_stage) : "final");
        }
      } catch (const EnvironmentError&) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        abort = true;
        return;
      }
      o.task_id = t.task_id;
      o.sample_index = t.sample_index;
      o.run_index = t.run_index;
    }
  };
  int workers = std::max(1, sim.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

double PassAtK(int n, int c, int k) {
  if (n < 1 || c < 0 || c > n || k < 1 || k > n) {
    throw DomainError(fmt::format("pass@k undefined for n={}, c={}, k={}", n, c, k));
  }
  if (n - c < k) return 1.0;
  double keep = 1.0;
  for (int i = n - c + 1; i <= n; ++i) keep *= 1.0 - static_cast<double>(k) / i;
  return 1.0 - keep;
}

MeanSd ComputeMeanSd(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("mean of an empty list");
  long double sum = 0;
  for (double v : values) sum += v;
  long double mean = sum / values.size();
  MeanSd out;
  out.mean = static_cast<double>(mean);
  if (values.size() >= 2) {
    long double ss = 0;
    long double correction = 0;
    for (double v : values) {
      long double d = v - mean;
      ss += d * d;
      correction += d;
    }
    // Corrected two-pass form; `correction` is zero in exact arithmetic.
    ss -= correction * correction / values.size();
    out.sd = static_cast<double>(std::sqrt(std::max(ss, 0.0L) / (values.size() - 1)));
  }
  return out;
}

EvalReport ScoreRun(const std::vector<AbstractionTrace>& traces, const std::vector<SampleOutcome>& outcomes,
                    const StrategyConfig& config, const std::vector<int>& ks) {
  if (traces.size() != outcomes.size()) {
    throw ReportError(fmt::format("{} traces but {} outcomes", traces.size(), outcomes.size()));
  }
  EvalReport report;
  report.label = ReportLabel(config);
  report.n = config.samples_per_problem;
  report.runs = config.runs;
  report.ks = ks;
  report.config = config.ToJson();
  for (int k : ks) {
    if (k < 1 || k > report.n) throw ReportError(fmt::format("k={} outside [1, n={}]", k, report.n));
  }

  std::map<std::string, std::size_t> task_index;
  for (const auto& t : traces) {
    if (task_index.emplace(t.task_id, report.task_ids.size()).second) report.task_ids.push_back(t.task_id);
  }
  report.per_run.resize(report.runs);
  for (int r = 0; r < report.runs; ++r) {
    report.per_run[r].run_index = r;
    for (const auto& id : report.task_ids) report.per_run[r].problems.push_back({id, 0, 0, 0});
  }
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const auto& o = outcomes[i];
    if (o.task_id != t.task_id || o.sample_index != t.sample_index || o.run_index != t.run_index) {
      throw ReportError(fmt::format("outcome {} ({} s{} r{}) does not match its trace ({} s{} r{})", i, o.task_id,
                                    o.sample_index, o.run_index, t.task_id, t.sample_index, t.run_index));
    }
    if (o.functional && !o.compiled) throw ReportError(fmt::format("outcome {} is functional but not compiled", i));
    if (t.run_index < 0 || t.run_index >= report.runs) {
      throw ReportError(fmt::format("trace {} has run index {} outside [0, {})", i, t.run_index, report.runs));
    }
    ProblemCounts& pc = report.per_run[t.run_index].problems[task_index[t.task_id]];
    ++pc.n;
    pc.compiled += o.compiled ? 1 : 0;
    pc.functional += o.functional ? 1 : 0;
  }
  for (const auto& run : report.per_run) {
    for (const auto& pc : run.problems) {
      if (pc.n != report.n) {
        throw ReportError(fmt::format("task `{}` run {} has {} samples, expected {}", pc.task_id, run.run_index,
                                      pc.n, report.n));
      }
    }
  }

  for (auto& run : report.per_run) {
    for (int k : ks) {
      double compile = 0;
      double functional = 0;
      for (const auto& pc : run.problems) {
        compile += PassAtK(pc.n, pc.compiled, k);
        functional += PassAtK(pc.n, pc.functional, k);
      }
      double count = std::max<std::size_t>(run.problems.size(), 1);
      run.compile_pass_at_k[k] = run.problems.empty() ? 0.0 : compile / count;
      run.functional_pass_at_k[k] = run.problems.empty() ? 0.0 : functional / count;
    }
  }
  for (int k : ks) {
    std::vector<double> compile;
    std::vector<double> functional;
    for (const auto& run : report.per_run) {
      compile.push_back(run.compile_pass_at_k.at(k));
      functional.push_back(run.functional_pass_at_k.at(k));
    }
    if (!compile.empty()) {
      report.compile_pass_at_k[k] = ComputeMeanSd(compile);
      report.functional_pass_at_k[k] = ComputeMeanSd(functional);
    }
  }

  std::int64_t abstraction = 0;
  for (const auto& t : traces) {
    report.tokens.total_input += t.TotalInputTokens();
    report.tokens.total_output += t.TotalOutputTokens();
    abstraction += t.AbstractionOutputTokens();
  }
  if (!traces.empty()) {
    double count = static_cast<double>(traces.size());
    report.tokens.avg_input = report.tokens.total_input / count;
    report.tokens.avg_output = report.tokens.total_output / count;
    if (config.strategy == Strategy::kAoT) report.tokens.per_abstraction = abstraction / count / 3.0;
  }
  return report;
}

json EvalReport::ToJson() const {
  json runs_json = json::array();
  for (const auto& run : per_run) {
    json problems_json = json::array();
    for (const auto& pc : run.problems) {
      problems_json.push_back(
          {{"task_id", pc.task_id}, {"n", pc.n}, {"compiled", pc.compiled}, {"functional", pc.functional}});
    }
    json compile = json::object();
    json functional = json::object();
    for (const auto& [k, v] : run.compile_pass_at_k) compile[fmt::format("pass@{}", k)] = v;
    for (const auto& [k, v] : run.functional_pass_at_k) functional[fmt::format("pass@{}", k)] = v;
    runs_json.push_back({{"run_index", run.run_index},
                         {"problems", std::move(problems_json)},
                         {"compile", std::move(compile)},
                         {"functional", std::move(functional)}});
  }
  json compile = json::object();
  json functional = json::object();
  for (const auto& [k, v] : compile_pass_at_k) compile[fmt::format("pass@{}", k)] = MeanSdJson(v);
  for (const auto& [k, v] : functional_pass_at_k) functional[fmt::format("pass@{}", k)] = MeanSdJson(v);
  return {{"label", label},
          {"n", n},
          {"runs", runs},
          {"k", ks},
          {"task_ids", task_ids},
          {"per_run", std::move(runs_json)},
          {"compile", std::move(compile)},
          {"functional", std::move(functional)},
          {"tokens",
           {{"avg_input", tokens.avg_input},
            {"avg_output", tokens.avg_output},
            {"per_abstraction", tokens.per_abstraction ? json(*tokens.per_abstraction) : json(nullptr)},
            {"total_input", tokens.total_input},
            {"total_output", tokens.total_output}}},
          {"config", config}};
}

std::string EvalReport::SummaryTable() const {
  std::string out = fmt::format("{}: {} problems, n={}, runs={}\n", label, task_ids.size(), n, runs);
  out += fmt::format("  {:<20} {:>16}\n", "metric (%)", "mean ± sd");
  for (const auto& [k, v] : compile_pass_at_k) {
    out += fmt::format("  {:<20} {:>16}\n", fmt::format("compile pass@{}", k), FormatMeanSd(v));
  }
  for (const auto& [k, v] : functional_pass_at_k) {
    out += fmt::format("  {:<20} {:>16}\n", fmt::format("functional pass@{}", k), FormatMeanSd(v));
  }
  out += fmt::format("  tokens: avg input {:.1f}, avg output {:.1f}", tokens.avg_input, tokens.avg_output);
  if (tokens.per_abstraction) out += fmt::format(", per abstraction {:.1f}", *tokens.per_abstraction);
  out += "\n";
  return out;
}

std::string ComparisonTable(const std::vector<EvalReport>& reports) {
  std::string out = fmt::format("{:<26} {:>16} {:>16} {:>10} {:>10} {:>10}\n", "configuration", "compile@1 (%)",
                                "functional@1 (%)", "avg in", "avg out", "per abst.");
  for (const auto& r : reports) {
    auto cell = [](const std::map<int, MeanSd>& m) {
      auto it = m.find(1);
      return it == m.end() ? std::string("-") : FormatMeanSd(it->second);
    };
    out += fmt::format("{:<26} {:>16} {:>16} {:>10.1f} {:>10.1f} {:>10}\n", r.label, cell(r.compile_pass_at_k),
                       cell(r.functional_pass_at_k), r.tokens.avg_input, r.tokens.avg_output,
                       r.tokens.per_abstraction ? fmt::format("{:.1f}", *r.tokens.per_abstraction) : "-");
  }
  return out;
}

}  // namespace aot
