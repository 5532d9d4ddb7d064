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

#include "feedloop/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "feedloop/digest.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

using nlohmann::json;

std::string_view to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Random: return "random";
    case GraphKind::Sbm: return "sbm";
    case GraphKind::File: return "file";
  }
  return "?";
}

namespace {

std::optional<GraphKind> parse_graph_kind(std::string_view s) {
  for (GraphKind k : {GraphKind::Complete, GraphKind::Random, GraphKind::Sbm, GraphKind::File}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string_view to_string(StatsMode m) {
  return m == StatsMode::Incremental ? "incremental" : "full_recompute";
}

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(describe() + " must be an object");
  }

  /// Call after reading every known key.
  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key '" + field(key) + "'");
    }
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(field(key) + " must be a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void count(const std::string& key, Int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
        throw ConfigError(field(key) + " must be a non-negative integer");
      }
      out = static_cast<Int>(v->get<std::uint64_t>());
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key) + " must be true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  template <std::size_t N>
  void numbers(const std::string& key, std::array<double, N>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array() || v->size() != N) {
        throw ConfigError(field(key) + " must be an array of " + std::to_string(N) + " numbers");
      }
      for (std::size_t i = 0; i < N; ++i) {
        if (!(*v)[i].is_number()) throw ConfigError(field(key) + " must contain numbers only");
        out[i] = (*v)[i].get<double>();
      }
    }
  }

 private:
  std::string describe() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_prior(ObjectReader& parent, const std::string& key, GroupPreferencePrior& prior) {
  if (const json* v = parent.get(key)) {
    ObjectReader r(*v, parent.field(key));
    r.numbers("mu", prior.mu);
    r.number("sigma", prior.sigma);
    r.finish();
  }
}

}  // namespace

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
  return seeds;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.seeds = seed_range(1, 20);
  return c;
}

void ExperimentConfig::validate() const {
  population.validate();
  switch (graph.kind) {
    case GraphKind::Random:
      if (!(graph.random.p_edge >= 0.0 && graph.random.p_edge <= 1.0)) {
        throw ConfigError("graph.p_edge must lie in [0, 1]");
      }
      break;
    case GraphKind::Sbm: graph.sbm.validate(); break;
    case GraphKind::File:
      if (graph.path.empty()) throw ConfigError("graph.path is required when graph.kind is 'file'");
      if (!graph.n) throw ConfigError("graph.n is required when graph.kind is 'file'");
      if (*graph.n != population.n) {
        throw ConfigError("graph.n (" + std::to_string(*graph.n) + ") does not match population.n (" +
                          std::to_string(population.n) + ")");
      }
      break;
    case GraphKind::Complete: break;
  }
  if (graph.kind != GraphKind::File && graph.n && *graph.n != population.n) {
    throw ConfigError("graph.n (" + std::to_string(*graph.n) + ") does not match population.n (" +
                      std::to_string(population.n) + ")");
  }
  engine.validate();
  metrics.validate(engine.steps);
  if (seeds.empty()) throw ConfigError("runs must list at least one seed");
  const std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (distinct.size() != seeds.size()) throw ConfigError("runs.seeds must be distinct");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c = default_config();
  if (doc.is_null()) return c;
  ObjectReader root(doc, "");

  if (const json* v = root.get("population")) {
    ObjectReader r(*v, "population");
    r.count("n", c.population.n);
    r.number("minority_share", c.population.minority_share);
    read_prior(r, "majority_prior", c.population.majority);
    read_prior(r, "minority_prior", c.population.minority);
    r.finish();
  }

  if (const json* v = root.get("graph")) {
    ObjectReader r(*v, "graph");
    std::string kind(to_string(c.graph.kind));
    r.string("kind", kind);
    const auto k = parse_graph_kind(kind);
    if (!k) throw ConfigError("graph.kind must be one of complete, random, sbm, file (got '" + kind + "')");
    c.graph.kind = *k;
    r.number("p_edge", c.graph.random.p_edge);
    if (const json* s = r.get("sbm")) {
      ObjectReader sr(*s, "graph.sbm");
      sr.number("maj_maj", c.graph.sbm.maj_maj);
      sr.number("min_min", c.graph.sbm.min_min);
      sr.number("maj_min", c.graph.sbm.maj_min);
      sr.number("min_maj", c.graph.sbm.min_maj);
      sr.finish();
    }
    r.string("path", c.graph.path);
    std::size_t n = 0;
    if (r.get("n")) {
      r.count("n", n);
      c.graph.n = n;
    }
    r.finish();
  }

  if (const json* v = root.get("policy")) {
    ObjectReader r(*v, "policy");
    std::string kind(to_string(c.engine.policy));
    r.string("kind", kind);
    const auto p = parse_policy(kind);
    if (!p) throw ConfigError("policy.kind must be one of random, topic_match, realgraph (got '" + kind + "')");
    c.engine.policy = *p;
    r.numbers("beta", c.engine.tie.beta);
    r.number("alpha", c.engine.ema.alpha);
    std::string scope(to_string(c.engine.standardization));
    r.string("standardization", scope);
    const auto sc = parse_scope(scope);
    if (!sc) throw ConfigError("policy.standardization must be all_pairs or follow_edges (got '" + scope + "')");
    c.engine.standardization = *sc;
    r.finish();
  }

  if (const json* v = root.get("engine")) {
    ObjectReader r(*v, "engine");
    r.count("steps", c.engine.steps);
    r.number("p_create", c.engine.p_create);
    r.number("p_request", c.engine.p_request);
    std::string mode(to_string(c.engine.stats_mode));
    r.string("stats_mode", mode);
    if (mode == "incremental") {
      c.engine.stats_mode = StatsMode::Incremental;
    } else if (mode == "full_recompute") {
      c.engine.stats_mode = StatsMode::FullRecompute;
    } else {
      throw ConfigError("engine.stats_mode must be incremental or full_recompute (got '" + mode + "')");
    }
    r.count("tie_summary_every", c.engine.tie_summary_every);
    r.finish();
  }

  if (const json* v = root.get("metrics")) {
    ObjectReader r(*v, "metrics");
    r.count("burn_in", c.metrics.burn_in);
    r.count("ma_window_ratio", c.metrics.ma_window_ratio);
    r.count("ma_window_gap", c.metrics.ma_window_gap);
    r.finish();
  }

  if (const json* v = root.get("runs")) {
    ObjectReader r(*v, "runs");
    const json* seeds = r.get("seeds");
    const json* count = r.get("count");
    const json* base = r.get("base_seed");
    if (seeds && (count || base)) throw ConfigError("runs.seeds cannot be combined with runs.count/base_seed");
    if (seeds) {
      if (!seeds->is_array()) throw ConfigError("runs.seeds must be an array of integers");
      c.seeds.clear();
      for (const auto& s : *seeds) {
        if (!s.is_number_unsigned()) throw ConfigError("runs.seeds must contain non-negative integers");
        c.seeds.push_back(s.get<std::uint64_t>());
      }
    } else {
      std::size_t n = c.seeds.size();
      std::uint64_t b = 1;
      r.count("count", n);
      r.count("base_seed", b);
      c.seeds = seed_range(b, n);
    }
    r.finish();
  }

  if (const json* v = root.get("output")) {
    ObjectReader r(*v, "output");
    r.string("dir", c.output_dir);
    r.boolean("write_logs", c.write_logs);
    r.finish();
  }

  root.finish();
  c.validate();
  return c;
}

ExperimentConfig parse_config_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    ExperimentConfig c = default_config();
    c.validate();
    return c;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json to_json(const ExperimentConfig& c) {
  auto prior = [](const GroupPreferencePrior& p) { return json{{"mu", p.mu}, {"sigma", p.sigma}}; };
  json graph{{"kind", std::string(to_string(c.graph.kind))},
             {"p_edge", c.graph.random.p_edge},
             {"sbm",
              {{"maj_maj", c.graph.sbm.maj_maj},
               {"min_min", c.graph.sbm.min_min},
               {"maj_min", c.graph.sbm.maj_min},
               {"min_maj", c.graph.sbm.min_maj}}},
             {"path", c.graph.path}};
  if (c.graph.n) graph["n"] = *c.graph.n;
  return json{
      {"population",
       {{"n", c.population.n},
        {"minority_share", c.population.minority_share},
        {"majority_prior", prior(c.population.majority)},
        {"minority_prior", prior(c.population.minority)}}},
      {"graph", graph},
      {"policy",
       {{"kind", std::string(to_string(c.engine.policy))}, {"beta", c.engine.tie.beta},
        {"alpha", c.engine.ema.alpha},
        {"standardization", std::string(to_string(c.engine.standardization))}}},
      {"engine",
       {{"steps", c.engine.steps},
        {"p_create", c.engine.p_create},
        {"p_request", c.engine.p_request},
        {"stats_mode", std::string(to_string(c.engine.stats_mode))},
        {"tie_summary_every", c.engine.tie_summary_every}}},
      {"metrics",
       {{"burn_in", c.metrics.burn_in},
        {"ma_window_ratio", c.metrics.ma_window_ratio},
        {"ma_window_gap", c.metrics.ma_window_gap}}},
      {"runs", {{"seeds", c.seeds}}},
      {"output", {{"dir", c.output_dir}, {"write_logs", c.write_logs}}},
  };
}

std::string config_hash(const ExperimentConfig& config) {
  // Output location does not affect results.
  json j = to_json(config);
  j.erase("output");
  return sha256_hex(j.dump());
}

}  // namespace feedloop
