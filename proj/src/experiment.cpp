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

#include "feedloop/experiment.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "feedloop/csv.hpp"
#include "feedloop/digest.hpp"
#include "feedloop/errors.hpp"
#include "feedloop/eventlog_io.hpp"
#include "feedloop/svg.hpp"

#ifndef FEEDLOOP_VERSION
#define FEEDLOOP_VERSION "unknown"
#endif

namespace feedloop {

namespace fs = std::filesystem;
using nlohmann::json;

Population build_population(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::Population);
  return sample_population(config.population, rng);
}

DirectedGraph build_graph(const ExperimentConfig& config, const Population& population, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::Graph);
  switch (config.graph.kind) {
    case GraphKind::Complete: return complete_graph(population.size());
    case GraphKind::Random: return random_graph(population.size(), config.graph.random, rng);
    case GraphKind::Sbm: return sbm_graph(population, config.graph.sbm, rng);
    case GraphKind::File: {
      std::ifstream in(config.graph.path, std::ios::binary);
      if (!in) throw IoError("cannot open graph file " + config.graph.path);
      return read_edge_list_csv(in, population.size());
    }
  }
  throw ConfigError("unknown graph kind");
}

RunArtifacts simulate_run(const ExperimentConfig& config, std::uint64_t seed) {
  RunArtifacts run;
  run.seed = seed;
  run.population = build_population(config, seed);
  run.graph = build_graph(config, run.population, seed);
  run.log = run_simulation(run.population, run.graph, config.engine, seed);
  return run;
}

RunMetrics run_metrics(const ExperimentConfig& config, const RunArtifacts& run) {
  return compute_run_metrics(run.log, run.population, run.graph, config.engine.ema.alpha, config.metrics);
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = 0;
      {
        std::lock_guard lock(mu);
        if (next >= count || first_error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<RunMetrics> run_in_memory(const ExperimentConfig& config, std::size_t jobs) {
  config.validate();
  std::vector<RunMetrics> out(config.seeds.size());
  parallel_for(config.seeds.size(), jobs, [&](std::size_t i) {
    const RunArtifacts run = simulate_run(config, config.seeds[i]);
    out[i] = run_metrics(config, run);
  });
  return out;
}

namespace {

std::optional<double> last_defined(const TimeSeries& s) {
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s.v[i]) return s.v[i];
  }
  return std::nullopt;
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

int exit_code_of(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return ConfigError::kExitCode;
  } catch (const IntegrityError&) {
    return IntegrityError::kExitCode;
  } catch (const IoError&) {
    return IoError::kExitCode;
  } catch (...) {
    return 1;
  }
}

std::string message_of(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

// Writes dir/name through `fill` and records its checksum.
template <typename Fill>
void emit(const fs::path& dir, const std::string& name, std::map<std::string, std::string>& checksums, Fill&& fill) {
  const fs::path path = dir / name;
  std::ostringstream buf;
  fill(buf);
  const std::string text = buf.str();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("error while writing " + path.string());
  checksums[name] = sha256_hex(text);
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

json meta_json(const ExperimentConfig& config, const EventLog& log) {
  return json{{"seed", log.seed},
              {"steps", log.steps},
              {"requests", log.requests},
              {"recommendations", log.recs.size()},
              {"content_items", log.content.size()},
              {"code_version", FEEDLOOP_VERSION},
              {"config_hash", config_hash(config)},
              {"config", to_json(config)}};
}

void write_run_logs(const fs::path& dir, const RunArtifacts& run, std::map<std::string, std::string>& sums) {
  emit(dir, "population.csv", sums, [&](std::ostream& o) { write_population_csv(o, run.population); });
  emit(dir, "edges.csv", sums, [&](std::ostream& o) { write_edge_list_csv(o, run.graph); });
  emit(dir, "content.csv", sums, [&](std::ostream& o) { write_content_csv(o, run.log); });
  emit(dir, "recs.csv", sums, [&](std::ostream& o) { write_recs_csv(o, run.log); });
}

void write_run_metrics(const fs::path& dir, const RunArtifacts& run, const RunMetrics& m,
                       std::map<std::string, std::string>& sums) {
  emit(dir, "ratio_prof.csv", sums, [&](std::ostream& o) { write_series_csv(o, m.ratio, "ratio_ma"); });
  emit(dir, "ratio_prof_per_item.csv", sums,
       [&](std::ostream& o) { write_series_csv(o, m.ratio_per_item, "ratio_ma"); });
  emit(dir, "int_gap.csv", sums, [&](std::ostream& o) { write_series_csv(o, m.gap, "gap_ma"); });
  emit(dir, "topic_shares.csv", sums, [&](std::ostream& o) { write_topic_shares_csv(o, m.topic_shares); });
  emit(dir, "per_user.csv", sums, [&](std::ostream& o) { write_per_user_csv(o, m.per_user); });
  emit(dir, "correlations.csv", sums, [&](std::ostream& o) { write_correlations_csv(o, m.correlations); });
  emit(dir, "recs_vs_in.csv", sums, [&](std::ostream& o) { write_recs_vs_in_csv(o, m.recs_vs_in); });
  emit(dir, "recs_vs_in_fits.csv", sums, [&](std::ostream& o) { write_recs_vs_in_fits_csv(o, m.recs_vs_in_fits); });
  emit(dir, "composition.csv", sums, [&](std::ostream& o) { write_composition_csv(o, m.composition); });
  const auto hist = edge_histogram(run.graph, run.population);
  emit(dir, "edge_hist.csv", sums, [&](std::ostream& o) { write_edge_histogram_csv(o, hist); });
  if (!run.log.tie_summary.empty()) {
    emit(dir, "tie_summary.csv", sums, [&](std::ostream& o) { write_tie_summary_csv(o, run.log.tie_summary); });
  }
}

json summary_json(const AggregateMetrics& a) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j{{"runs", a.runs},
         {"time_avg_ratio_prof", opt(a.time_avg_ratio)},
         {"final_ratio_prof", opt(a.final_ratio)},
         {"cross_group_professional_share", opt(a.cross_group_share)},
         {"minority_majority_follower_share", a.minority_majority_follower_share},
         {"in_group_edge_share", a.in_group_edge_share}};
  if (a.trend) {
    j["ratio_trend"] = {{"mean_slope", a.trend->mean}, {"t", a.trend->t}, {"p_value", a.trend->p_value},
                        {"n", a.trend->n}};
  } else {
    j["ratio_trend"] = nullptr;
  }
  return j;
}

void write_aggregate(const fs::path& dir, const AggregateMetrics& a, std::map<std::string, std::string>& sums) {
  emit(dir, "ratio_prof.csv", sums, [&](std::ostream& o) { write_series_csv(o, a.ratio, "ratio_ma"); });
  emit(dir, "ratio_prof_per_item.csv", sums,
       [&](std::ostream& o) { write_series_csv(o, a.ratio_per_item, "ratio_ma"); });
  emit(dir, "int_gap.csv", sums, [&](std::ostream& o) { write_series_csv(o, a.gap, "gap_ma"); });
  emit(dir, "topic_shares.csv", sums, [&](std::ostream& o) { write_topic_shares_csv(o, a.topic_shares); });
  emit(dir, "per_user.csv", sums, [&](std::ostream& o) { write_per_user_csv(o, a.per_user); });
  emit(dir, "correlations.csv", sums, [&](std::ostream& o) { write_correlations_csv(o, a.correlations); });
  emit(dir, "recs_vs_in.csv", sums, [&](std::ostream& o) { write_recs_vs_in_csv(o, a.recs_vs_in); });
  const auto fits = fit_recs_vs_incoming_edges(a.recs_vs_in);
  emit(dir, "recs_vs_in_fits.csv", sums, [&](std::ostream& o) { write_recs_vs_in_fits_csv(o, fits); });
  emit(dir, "summary.json", sums, [&](std::ostream& o) { o << summary_json(a).dump(2) << '\n'; });
}

void render_into(const fs::path& dir, std::map<std::string, std::string>& sums, std::vector<std::string>& warnings,
                 const std::string& prefix) {
  const auto report = svg::render_metrics_dir(dir);
  for (const auto& p : report.written) sums[p.filename().string()] = sha256_file(p);
  for (const auto& w : report.warnings) warnings.push_back(prefix + w);
}

void write_manifest(const ExperimentResult& result, const ExperimentConfig& config) {
  json runs = json::array();
  for (const auto& r : result.runs) {
    json entry{{"seed", r.seed}, {"dir", r.dir.filename().string()}, {"complete", r.complete}, {"files", r.checksums}};
    if (!r.error.empty()) entry["error"] = r.error;
    runs.push_back(std::move(entry));
  }
  const json manifest{{"code_version", FEEDLOOP_VERSION},
                      {"config_hash", config_hash(config)},
                      {"config", to_json(config)},
                      {"complete", result.complete},
                      {"runs", std::move(runs)},
                      {"files", result.checksums},
                      {"warnings", result.warnings}};
  const fs::path path = result.dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

// Aggregates the completed runs, renders and writes the manifest.
void finalize(ExperimentResult& result, const ExperimentConfig& config, const std::vector<RunMetrics>& metrics) {
  result.complete = true;
  for (const auto& r : result.runs) {
    if (!r.complete) {
      result.complete = false;
      result.warnings.push_back("run " + std::to_string(r.seed) + " failed: " + r.error);
      if (result.exit_code == 0) result.exit_code = r.exit_code;
    }
  }
  if (!metrics.empty()) {
    result.aggregate = aggregate(metrics);
    write_aggregate(result.dir, result.aggregate, result.checksums);
    render_into(result.dir, result.checksums, result.warnings, "");
  } else {
    result.warnings.push_back("no run completed; aggregate metrics not written");
  }
  write_manifest(result, config);
}

fs::path run_dir_name(const fs::path& root, std::uint64_t seed) { return root / ("run_" + std::to_string(seed)); }

}  // namespace

AggregateMetrics aggregate(std::span<const RunMetrics> runs) {
  AggregateMetrics a;
  a.runs = runs.size();
  if (runs.empty()) return a;

  std::vector<TimeSeries> ratio;
  std::vector<TimeSeries> per_item;
  std::vector<TimeSeries> gap;
  std::vector<double> cross;
  for (const auto& r : runs) {
    ratio.push_back(r.ratio);
    per_item.push_back(r.ratio_per_item);
    gap.push_back(r.gap);
    if (r.cross_group_share) cross.push_back(*r.cross_group_share);
    a.per_user.insert(a.per_user.end(), r.per_user.begin(), r.per_user.end());
    a.recs_vs_in.insert(a.recs_vs_in.end(), r.recs_vs_in.begin(), r.recs_vs_in.end());
    a.minority_majority_follower_share += r.composition.share(Group::Minority, Direction::In, Group::Majority);
    a.in_group_edge_share += r.composition.in_group_edge_share;
  }
  const double k = static_cast<double>(runs.size());
  a.minority_majority_follower_share /= k;
  a.in_group_edge_share /= k;
  a.ratio = mean_over_runs(ratio);
  a.ratio_per_item = mean_over_runs(per_item);
  a.gap = mean_over_runs(gap);
  a.time_avg_ratio = a.ratio.mean();
  a.final_ratio = last_defined(a.ratio);
  a.cross_group_share = mean_of(cross);
  try {
    a.trend = trend_test(ratio);
  } catch (const UndefinedStatistic&) {
    a.trend = std::nullopt;
  }
  a.correlations = cross_group_correlations(a.per_user);

  // Shares: mean of defined per-run shares; counts summed.
  const auto& first = runs.front().topic_shares;
  for (std::size_t i = 0; i < first.size(); ++i) {
    TopicShare s{first[i].topic, first[i].receiver, std::nullopt, std::nullopt, 0, 0};
    std::vector<double> rec;
    std::vector<double> created;
    for (const auto& r : runs) {
      if (i >= r.topic_shares.size()) throw IntegrityError("runs disagree on topic share rows");
      const auto& x = r.topic_shares[i];
      if (x.rec_share_minority) rec.push_back(*x.rec_share_minority);
      if (x.creation_share_minority) created.push_back(*x.creation_share_minority);
      s.recs += x.recs;
      s.created += x.created;
    }
    s.rec_share_minority = mean_of(rec);
    s.creation_share_minority = mean_of(created);
    a.topic_shares.push_back(s);
  }
  return a;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options) {
  config.validate();
  ExperimentResult result;
  result.dir = config.output_dir;
  make_dir(result.dir);

  const std::size_t k = config.seeds.size();
  result.runs.resize(k);
  std::vector<std::optional<RunMetrics>> metrics(k);
  parallel_for(k, options.jobs, [&](std::size_t i) {
    RunOutcome& out = result.runs[i];
    out.seed = config.seeds[i];
    out.dir = run_dir_name(result.dir, out.seed);
    try {
      make_dir(out.dir);
      const RunArtifacts run = simulate_run(config, out.seed);
      if (config.write_logs) write_run_logs(out.dir, run, out.checksums);
      RunMetrics m = run_metrics(config, run);
      write_run_metrics(out.dir, run, m, out.checksums);
      emit(out.dir, "meta.json", out.checksums,
           [&](std::ostream& o) { o << meta_json(config, run.log).dump(2) << '\n'; });
      metrics[i] = std::move(m);
      out.complete = true;
    } catch (...) {
      const auto e = std::current_exception();
      out.error = message_of(e);
      out.exit_code = exit_code_of(e);
    }
  });

  std::vector<RunMetrics> done;
  for (auto& m : metrics) {
    if (m) done.push_back(std::move(*m));
  }
  finalize(result, config, done);
  return result;
}

RunArtifacts load_run(const fs::path& run_dir, ExperimentConfig& config_out) {
  auto open = [&](const char* name) {
    std::ifstream in(run_dir / name, std::ios::binary);
    if (!in) throw IoError("cannot open " + (run_dir / name).string());
    return in;
  };
  json meta;
  {
    auto in = open("meta.json");
    try {
      meta = json::parse(in);
    } catch (const json::exception& e) {
      throw IoError("meta.json in " + run_dir.string() + " is not valid JSON: " + e.what());
    }
  }
  if (!meta.contains("config") || !meta.contains("seed")) {
    throw IoError("meta.json in " + run_dir.string() + " lacks config or seed");
  }
  config_out = parse_config(meta["config"]);

  RunArtifacts run;
  run.seed = meta["seed"].get<std::uint64_t>();
  {
    auto in = open("population.csv");
    run.population = read_population_csv(in);
  }
  {
    auto in = open("edges.csv");
    run.graph = read_edge_list_csv(in, run.population.size());
  }
  {
    auto in = open("content.csv");
    run.log.content = read_content_csv(in);
  }
  {
    auto in = open("recs.csv");
    run.log.recs = read_recs_csv(in);
  }
  run.log.seed = run.seed;
  run.log.steps = meta.value("steps", config_out.engine.steps);
  run.log.requests = meta.value("requests", std::uint64_t{0});
  for (const auto& c : run.log.content) {
    if (c.creator >= run.population.size()) throw IntegrityError("content creator out of range");
  }
  for (const auto& r : run.log.recs) {
    if (r.viewer >= run.population.size()) throw IntegrityError("recommendation viewer out of range");
    if (r.content >= run.log.content.size()) throw IntegrityError("recommendation of unknown content");
  }
  return run;
}

ExperimentConfig config_from_manifest(const fs::path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw IoError("cannot open " + manifest.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(manifest.string() + " is not valid JSON: " + e.what());
  }
  if (!j.contains("config")) throw IoError(manifest.string() + " has no config");
  return parse_config(j["config"]);
}

ExperimentResult recompute_metrics(const fs::path& log_dir, const fs::path& out_dir) {
  if (!fs::is_directory(log_dir)) throw IoError("log directory " + log_dir.string() + " does not exist");

  std::vector<fs::path> run_dirs;
  const bool single = fs::exists(log_dir / "meta.json");
  if (single) {
    run_dirs.push_back(log_dir);
  } else {
    for (const auto& entry : fs::directory_iterator(log_dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_directory() && name.rfind("run_", 0) == 0) run_dirs.push_back(entry.path());
    }
    std::sort(run_dirs.begin(), run_dirs.end());
    if (run_dirs.empty()) throw IoError("no run directories under " + log_dir.string());
  }

  ExperimentResult result;
  result.dir = out_dir;
  make_dir(out_dir);
  ExperimentConfig config;
  std::vector<RunMetrics> done;
  for (const auto& dir : run_dirs) {
    RunOutcome out;
    out.dir = single ? out_dir : out_dir / dir.filename();
    try {
      ExperimentConfig run_config;
      const RunArtifacts run = load_run(dir, run_config);
      if (done.empty()) config = run_config;
      out.seed = run.seed;
      make_dir(out.dir);
      RunMetrics m = run_metrics(run_config, run);
      write_run_metrics(out.dir, run, m, out.checksums);
      done.push_back(std::move(m));
      out.complete = true;
    } catch (...) {
      const auto e = std::current_exception();
      out.error = dir.filename().string() + ": " + message_of(e);
      out.exit_code = exit_code_of(e);
    }
    result.runs.push_back(std::move(out));
  }
  if (single) {
    // Per-run files already sit in out_dir; render them and record a manifest.
    RunOutcome& r = result.runs.front();
    if (!r.complete) {
      result.exit_code = r.exit_code;
      result.warnings.push_back(r.error);
      return result;
    }
    render_into(out_dir, r.checksums, result.warnings, "");
    result.aggregate = aggregate(done);
    result.complete = true;
    return result;
  }
  if (done.empty()) {
    result.exit_code = result.runs.front().exit_code;
    for (const auto& r : result.runs) result.warnings.push_back(r.error);
    return result;
  }
  config.output_dir = out_dir.string();
  config.seeds.clear();
  for (const auto& r : result.runs) {
    if (r.complete) config.seeds.push_back(r.seed);
  }
  finalize(result, config, done);
  return result;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::MinorityShare: return "minority_share";
    case SweepAxis::SbmParams: return "sbm_params";
    case SweepAxis::Beta4: return "beta4";
    case SweepAxis::Policy: return "policy";
  }
  return "?";
}

SweepSpec parse_sweep(std::string_view axis, std::string_view values) {
  std::optional<SweepAxis> a;
  for (SweepAxis x : {SweepAxis::MinorityShare, SweepAxis::SbmParams, SweepAxis::Beta4, SweepAxis::Policy}) {
    if (axis == to_string(x)) a = x;
  }
  if (!a) {
    throw ConfigError("sweep axis must be one of minority_share, sbm_params, beta4, policy (got '" +
                      std::string(axis) + "')");
  }
  SweepSpec spec{*a, {}};
  const std::string list = values.empty() ? default_sweep_values(*a) : std::string(values);
  for (const auto& v : csv::split(list)) {
    if (v.empty()) throw ConfigError("sweep values must not be empty");
    spec.values.emplace_back(v);
  }
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  // Fail early on malformed values.
  for (const auto& v : spec.values) apply_sweep_value(default_config(), spec.axis, v).validate();
  return spec;
}

std::string default_sweep_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::MinorityShare: return "0.05,0.1,0.2,0.3,0.4";
    case SweepAxis::SbmParams: return "0.4/0.5/0.1/0.1,0.5/0.5/0.5/0.5";
    case SweepAxis::Beta4: return "1,2,3,4,5,6,7,8,9,10";
    case SweepAxis::Policy: return "random,topic_match,realgraph";
  }
  return "";
}

ExperimentConfig apply_sweep_value(ExperimentConfig config, SweepAxis axis, const std::string& value) {
  auto number = [&](std::string_view s) {
    try {
      return csv::parse_double(s);
    } catch (const std::exception&) {
      throw ConfigError("sweep value '" + std::string(s) + "' is not a number");
    }
  };
  switch (axis) {
    case SweepAxis::MinorityShare: config.population.minority_share = number(value); break;
    case SweepAxis::Beta4: config.engine.tie.beta[3] = number(value); break;
    case SweepAxis::Policy: {
      const auto p = parse_policy(value);
      if (!p) throw ConfigError("sweep value '" + value + "' is not a policy");
      config.engine.policy = *p;
      break;
    }
    case SweepAxis::SbmParams: {
      std::vector<std::string> parts;
      std::string cur;
      for (char c : value) {
        if (c == '/') {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      parts.push_back(cur);
      if (parts.size() != 4) {
        throw ConfigError("sbm_params sweep value '" + value + "' must be maj_maj/min_min/maj_min/min_maj");
      }
      config.graph.kind = GraphKind::Sbm;
      config.graph.sbm = SbmParams{number(parts[0]), number(parts[1]), number(parts[2]), number(parts[3])};
      break;
    }
  }
  return config;
}

SweepResult run_sweep(const ExperimentConfig& config, const SweepSpec& sweep, const ExperimentOptions& options) {
  SweepResult result;
  const fs::path root = config.output_dir;
  make_dir(root);
  for (const auto& value : sweep.values) {
    ExperimentConfig c = apply_sweep_value(config, sweep.axis, value);
    std::string dir = std::string(to_string(sweep.axis)) + "_" + value;
    std::replace(dir.begin(), dir.end(), '/', '-');
    c.output_dir = (root / dir).string();
    ExperimentResult r = run_experiment(c, options);
    if (r.exit_code != 0 && result.exit_code == 0) result.exit_code = r.exit_code;

    SweepRow row{value, std::nullopt, std::nullopt, std::nullopt};
    std::vector<double> finals;
    for (const auto& run : r.runs) {
      if (!run.complete) continue;
      std::ifstream in(run.dir / "ratio_prof.csv", std::ios::binary);
      if (!in) continue;
      if (const auto f = last_defined(read_series_csv(in))) finals.push_back(*f);
    }
    row.mean_final_ratio = mean_of(finals);
    if (r.aggregate.trend) {
      row.trend_slope = r.aggregate.trend->mean;
      row.trend_p_value = r.aggregate.trend->p_value;
    }
    result.rows.push_back(row);
    result.experiments.push_back(std::move(r));
  }

  const fs::path path = root / "sweep_summary.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  csv::Writer w(out);
  w.field("axis_value").field("mean_final_ratio").field("trend_slope").end_row();
  for (const auto& row : result.rows) {
    w.field(row.axis_value).field(row.mean_final_ratio).field(row.trend_slope).end_row();
  }
  if (!out) throw IoError("error while writing " + path.string());
  return result;
}

}  // namespace feedloop
