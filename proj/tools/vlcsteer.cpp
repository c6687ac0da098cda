// Copyright 2026 The vlcsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vlcsteer: run steering, clustering, power and NOMA experiments from a
// scenario file and write per-user rate reports.
//
//   vlcsteer steer --users 4 --trials 20 --scheme no_steering,sbsf
//   vlcsteer experiment --kind beam_count_sweep --trials 100 --out sweep.csv
//
// Exit codes: 0 success, 2 invalid input, 3 solver failure.
// VLCSTEER_LOG_LEVEL=quiet|info|debug controls stderr chatter.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlcsteer/experiment.hpp"
#include "vlcsteer/report.hpp"
#include "vlcsteer/scenario.hpp"

namespace {

using namespace vlcsteer;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* env = std::getenv("VLCSTEER_LOG_LEVEL");
  if (!env) return LogLevel::kInfo;
  const std::string v(env);
  if (v == "quiet" || v == "error") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::vector<std::string> schemes;
  std::optional<double> delta_deg;
  std::vector<std::size_t> users;
  std::vector<std::size_t> beams;
  unsigned threads = 0;
  std::string kind;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--scenario", a.scenario_path, "Scenario JSON file (defaults apply when omitted)");
  cmd->add_option("--out", a.out_path, "Report path (stdout when omitted)");
  cmd->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", a.seed, "Master seed");
  cmd->add_option("--trials", a.trials, "Monte Carlo trials");
  cmd->add_option("--scheme", a.schemes, "Comma separated scheme list")->delimiter(',');
  cmd->add_option("--delta-deg", a.delta_deg, "Angular grid step in degrees");
  cmd->add_option("--users", a.users, "User counts K, comma separated")->delimiter(',');
  cmd->add_option("--beams", a.beams, "Beam counts N, comma separated")->delimiter(',');
  cmd->add_option("--threads", a.threads, "Worker threads (0: all cores)");
}

ExperimentSpec spec_for(const std::string& command, const CommonArgs& a, const Scenario& s) {
  ExperimentSpec spec;
  if (command == "experiment") {
    const auto kind = parse_kind(a.kind);
    if (!kind) throw std::invalid_argument("--kind: unknown experiment kind '" + a.kind + "'");
    spec = default_spec(*kind);
  } else {
    // Single-trial defaults for the module subcommands.
    spec.kind = ExperimentKind::kNomaCoeffSweep;
    spec.name = command;
    spec.trials = 1;
    spec.users = {10};
    spec.beams = {s.n_beams};
    if (command == "steer") {
      spec.kind = ExperimentKind::kSingleBeamSweep;
      spec.beams = {1};
      spec.schemes = {Scheme::kSbsf};
    } else if (command == "cluster") {
      spec.kind = ExperimentKind::kMultiBeamSweep;
      spec.schemes = {Scheme::kMultiStream};
    } else if (command == "power") {
      spec.kind = ExperimentKind::kPowerOptSweep;
      spec.schemes = {Scheme::kPowerOptSum};
    } else {
      spec.kind = ExperimentKind::kNomaCoeffSweep;
      spec.schemes = {Scheme::kNoma};
    }
  }
  spec.seed = a.seed.value_or(s.seed);
  if (a.trials) spec.trials = *a.trials;
  if (!a.users.empty()) spec.users = a.users;
  if (!a.beams.empty()) spec.beams = a.beams;
  if (!a.schemes.empty()) {
    std::string problems;
    spec.schemes.clear();
    for (const std::string& name : a.schemes) {
      if (const auto scheme = parse_scheme(name))
        spec.schemes.push_back(*scheme);
      else
        problems += (problems.empty() ? "--scheme: unknown scheme '" : ", '") + name + "'";
    }
    if (!problems.empty()) throw std::invalid_argument(problems);
  }
  return spec;
}

int run(const std::string& command, const CommonArgs& a) {
  const LogLevel level = log_level();
  Scenario s = a.scenario_path.empty() ? Scenario{} : load_scenario(a.scenario_path);
  if (a.delta_deg) {
    s.delta_deg = *a.delta_deg;
    validate(s);
  }
  const ExperimentSpec spec = spec_for(command, a, s);
  const RateReport report = run_experiment(s, spec, RunOptions{a.threads});

  if (level != LogLevel::kQuiet && report.excluded_trials > 0)
    std::cerr << "vlcsteer: " << report.excluded_trials << " trial(s) excluded after solver failures\n";
  if (level == LogLevel::kDebug)
    for (const std::string& f : report.failures) std::cerr << "vlcsteer: " << f << "\n";

  const ReportFormat format = a.format == "json" ? ReportFormat::kJson : ReportFormat::kCsv;
  if (a.out_path.empty()) {
    std::cout << (format == ReportFormat::kJson ? report_json(report) : report_csv(report));
  } else {
    emit_report(report, format, a.out_path);
    if (level == LogLevel::kDebug) std::cerr << "vlcsteer: wrote " << a.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steerable-beam VLC rate experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"steer", "Single-beam steering for sampled users"},
      {"cluster", "Multi-beam user clustering"},
      {"power", "Beam power optimization"},
      {"noma", "NOMA pairing and coefficient optimization"},
      {"experiment", "Run a full experiment sweep"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, args);
    if (name == "experiment") cmd->add_option("--kind", args.kind, "Experiment kind")->required();
    cmd->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(chosen, args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "vlcsteer: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "vlcsteer: solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "vlcsteer: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vlcsteer: " << e.what() << "\n";
    return 1;
  }
}
