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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feedloop/config.hpp"
#include "feedloop/engine.hpp"
#include "feedloop/metrics.hpp"

namespace feedloop {

/// Everything one seed produces before metrics.
struct RunArtifacts {
  std::uint64_t seed = 0;
  Population population;
  DirectedGraph graph;
  EventLog log;
};

Population build_population(const ExperimentConfig& config, std::uint64_t seed);
DirectedGraph build_graph(const ExperimentConfig& config, const Population& population, std::uint64_t seed);
RunArtifacts simulate_run(const ExperimentConfig& config, std::uint64_t seed);
RunMetrics run_metrics(const ExperimentConfig& config, const RunArtifacts& run);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Simulates every seed and returns per-run metrics in seed order, without
/// touching the filesystem.
std::vector<RunMetrics> run_in_memory(const ExperimentConfig& config, std::size_t jobs = 1);

/// Cross-run reduction: series are means over runs of per-run series.
struct AggregateMetrics {
  TimeSeries ratio;
  TimeSeries ratio_per_item;
  TimeSeries gap;
  std::optional<double> time_avg_ratio;  // mean of `ratio` over its points
  std::optional<double> final_ratio;
  std::optional<MeanTest> trend;         // per-run ratio slopes against zero
  std::vector<TopicShare> topic_shares;  // per (topic, receiver): mean of per-run shares
  std::optional<double> cross_group_share;
  std::vector<CrossGroupRow> per_user;  // pooled over runs
  std::vector<NamedCorrelation> correlations;  // on the pooled rows
  std::vector<RecsVsInDegreeRow> recs_vs_in;   // pooled
  double minority_majority_follower_share = 0.0;  // mean over runs
  double in_group_edge_share = 0.0;               // mean over runs
  std::size_t runs = 0;
};

AggregateMetrics aggregate(std::span<const RunMetrics> runs);

struct RunOutcome {
  std::uint64_t seed = 0;
  std::filesystem::path dir;
  bool complete = false;
  int exit_code = 0;  // 0, or the CLI code of the failure
  std::string error;
  std::map<std::string, std::string> checksums;  // file name -> sha256
};

struct ExperimentOptions {
  std::size_t jobs = 1;
};

struct ExperimentResult {
  std::filesystem::path dir;
  std::vector<RunOutcome> runs;
  AggregateMetrics aggregate;
  std::map<std::string, std::string> checksums;  // top-level files
  std::vector<std::string> warnings;
  bool complete = false;
  int exit_code = 0;
};

/// One subdirectory per seed (run_<seed>) with the event log and per-run
/// metrics, aggregated metrics and SVGs at the top, and manifest.json.
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {});

/// Recomputes metrics from stored logs. `log_dir` is either one run
/// directory or an experiment directory of run_* subdirectories.
ExperimentResult recompute_metrics(const std::filesystem::path& log_dir, const std::filesystem::path& out_dir);

/// Loads population.csv, edges.csv, content.csv, recs.csv and meta.json.
RunArtifacts load_run(const std::filesystem::path& run_dir, ExperimentConfig& config_out);

/// Config echoed in a manifest or run meta.json.
ExperimentConfig config_from_manifest(const std::filesystem::path& manifest);

enum class SweepAxis : std::uint8_t { MinorityShare, SbmParams, Beta4, Policy };
std::string_view to_string(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis;
  std::vector<std::string> values;
};

/// `values` is comma-separated; SBM tuples are maj_maj/min_min/maj_min/min_maj.
/// Throws ConfigError.
/// An empty `values` selects default_sweep_values.
SweepSpec parse_sweep(std::string_view axis, std::string_view values);
/// Grid used when no values are given: beta4 1..10, minority_share
/// {0.05, 0.1, 0.2, 0.3, 0.4}, the homophilic and balanced SBM tuples, and
/// all three policies.
std::string default_sweep_values(SweepAxis axis);
ExperimentConfig apply_sweep_value(ExperimentConfig config, SweepAxis axis, const std::string& value);

struct SweepRow {
  std::string axis_value;
  std::optional<double> mean_final_ratio;
  std::optional<double> trend_slope;  // mean of per-run ratio slopes
  std::optional<double> trend_p_value;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ExperimentResult> experiments;
  int exit_code = 0;
};

/// One experiment per value under <out>/<axis>_<value>, sharing the base
/// seeds, plus <out>/sweep_summary.csv.
SweepResult run_sweep(const ExperimentConfig& config, const SweepSpec& sweep, const ExperimentOptions& options = {});

}  // namespace feedloop
