// Copyright 2026 The feedloop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "feedloop/config.hpp"
#include "feedloop/errors.hpp"
#include "feedloop/experiment.hpp"
#include "feedloop/svg.hpp"

#ifndef FEEDLOOP_VERSION
#define FEEDLOOP_VERSION "unknown"
#endif

namespace {

using namespace feedloop;

struct Overrides {
  std::string config_path;
  std::string manifest_path;
  std::size_t seed_count = 0;
  std::size_t jobs = 1;
  std::string out;
  bool no_logs = false;
  bool print_config = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  auto* config = cmd->add_option("--config", o.config_path, "JSON config file; defaults apply when omitted");
  cmd->add_option("--manifest", o.manifest_path, "replay the config recorded in an experiment manifest")
      ->excludes(config);
  cmd->add_option("--seed-count", o.seed_count, "run seeds base..base+N-1 instead of the configured list");
  cmd->add_option("--jobs", o.jobs, "parallel run workers")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory (overrides output.dir)");
  cmd->add_flag("--no-logs", o.no_logs, "skip event log CSVs");
  cmd->add_flag("--print-config", o.print_config, "print the resolved config and exit");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c = !o.manifest_path.empty() ? config_from_manifest(o.manifest_path)
                       : o.config_path.empty()   ? parse_config_text("")
                                                 : load_config(o.config_path);
  if (o.seed_count > 0) c.seeds = seed_range(c.seeds.empty() ? 1 : c.seeds.front(), o.seed_count);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.no_logs) c.write_logs = false;
  c.validate();
  return c;
}

void report(const ExperimentResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::size_t ok = 0;
  for (const auto& run : r.runs) ok += run.complete ? 1 : 0;
  std::cout << r.dir.string() << ": " << ok << "/" << r.runs.size() << " runs complete\n";
  if (r.aggregate.time_avg_ratio) {
    std::cout << "time-averaged professional ratio " << *r.aggregate.time_avg_ratio << '\n';
  }
  if (r.aggregate.trend) {
    std::cout << "ratio trend: mean slope " << r.aggregate.trend->mean << ", p = " << r.aggregate.trend->p_value
              << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Agent-based simulation of feed recommendation on directed follow graphs"};
  app.set_version_flag("--version", FEEDLOOP_VERSION);
  app.require_subcommand(1);

  Overrides sim;
  auto* simulate = app.add_subcommand("simulate", "run one experiment (one simulation per seed)");
  add_common(simulate, sim);

  Overrides swp;
  std::string axis;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "run one experiment per value of a parameter axis");
  add_common(sweep, swp);
  sweep->add_option("--axis", axis, "minority_share, sbm_params, beta4 or policy")->required();
  sweep->add_option("--values", values, "comma-separated values; SBM tuples as a/b/c/d");

  std::string log_dir;
  std::string metrics_out;
  auto* metrics = app.add_subcommand("metrics", "recompute metrics from stored event logs");
  metrics->add_option("--log-dir", log_dir, "a run directory or an experiment directory")->required();
  metrics->add_option("--out", metrics_out, "output directory (default <log-dir>/recomputed)");

  std::string metrics_dir;
  auto* render = app.add_subcommand("render", "render metric CSVs in a directory to SVG");
  render->add_option("--metrics-dir", metrics_dir, "directory holding metric CSVs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ConfigError::kExitCode;
  }

  if (simulate->parsed()) {
    const ExperimentConfig c = resolve(sim);
    if (sim.print_config) {
      std::cout << to_json(c).dump(2) << '\n';
      return 0;
    }
    const auto r = run_experiment(c, ExperimentOptions{sim.jobs});
    report(r);
    return r.exit_code;
  }
  if (sweep->parsed()) {
    const ExperimentConfig c = resolve(swp);
    const SweepSpec spec = parse_sweep(axis, values);
    if (swp.print_config) {
      std::cout << to_json(c).dump(2) << '\n';
      return 0;
    }
    const auto r = run_sweep(c, spec, ExperimentOptions{swp.jobs});
    for (const auto& e : r.experiments) report(e);
    std::cout << "summary: " << (std::filesystem::path(c.output_dir) / "sweep_summary.csv").string() << '\n';
    return r.exit_code;
  }
  if (metrics->parsed()) {
    const std::filesystem::path out =
        metrics_out.empty() ? std::filesystem::path(log_dir) / "recomputed" : std::filesystem::path(metrics_out);
    const auto r = recompute_metrics(log_dir, out);
    report(r);
    return r.exit_code;
  }
  if (render->parsed()) {
    if (!std::filesystem::is_directory(metrics_dir)) throw IoError("no such directory " + metrics_dir);
    const auto r = svg::render_metrics_dir(metrics_dir);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& p : r.written) std::cout << p.string() << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ConfigError::kExitCode;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return IntegrityError::kExitCode;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return IoError::kExitCode;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
