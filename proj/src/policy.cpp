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

#include "feedloop/policy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"
#include "feedloop/kernels.hpp"

namespace feedloop {

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Random: return "random";
    case PolicyKind::TopicMatch: return "topic_match";
    case PolicyKind::RealGraph: return "realgraph";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view s) {
  for (PolicyKind p : {PolicyKind::Random, PolicyKind::TopicMatch, PolicyKind::RealGraph}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

std::string_view to_string(StandardizationScope s) {
  return s == StandardizationScope::AllPairs ? "all_pairs" : "follow_edges";
}

std::optional<StandardizationScope> parse_scope(std::string_view s) {
  for (StandardizationScope v : {StandardizationScope::AllPairs, StandardizationScope::FollowEdges}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

void EmaParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("policy.alpha must lie in (0, 1)");
}

std::span<const double> EdgeState::column(Feature f) const {
  switch (f) {
    case Feature::OutEdge: return out_edge;
    case Feature::InEdge: return in_edge;
    case Feature::Distance: return dist;
    case Feature::IntCount: return int_count;
  }
  return {};
}

namespace {

using Bitset = std::vector<std::uint64_t>;

// Row-major n x words adjacency bitsets.
std::vector<std::uint64_t> adjacency_bits(const DirectedGraph& graph, std::size_t words, bool outgoing) {
  std::vector<std::uint64_t> bits(graph.node_count() * words, 0);
  for (UserId u = 0; u < graph.node_count(); ++u) {
    const auto nbrs = outgoing ? graph.out_neighbors(u) : graph.in_neighbors(u);
    std::uint64_t* row = bits.data() + static_cast<std::size_t>(u) * words;
    for (UserId v : nbrs) row[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  return bits;
}

double euclidean(const TopicVector& a, const TopicVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < kNumTopics; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

EdgeState compute_static_features(const DirectedGraph& graph, const Population& population) {
  if (graph.node_count() != population.size()) {
    throw IntegrityError("graph and population sizes differ");
  }
  const std::size_t n = graph.node_count();
  const std::size_t edges = graph.edge_count();
  const std::size_t words = (n + 63) / 64;
  const auto out_bits = adjacency_bits(graph, words, true);
  const auto in_bits = adjacency_bits(graph, words, false);
  auto row = [words](const std::vector<std::uint64_t>& bits, UserId u) {
    return std::span<const std::uint64_t>(bits.data() + static_cast<std::size_t>(u) * words, words);
  };

  EdgeState s;
  s.out_edge.resize(edges);
  s.in_edge.resize(edges);
  s.dist.resize(edges);
  s.int_count.assign(edges, 0.0);
  for (EdgeId e = 0; e < edges; ++e) {
    const UserId i = graph.edge_source(e);
    const UserId j = graph.edge_target(e);
    s.out_edge[e] = static_cast<double>(kernels::and_popcount(row(out_bits, i), row(out_bits, j)));
    s.in_edge[e] = static_cast<double>(kernels::and_popcount(row(in_bits, i), row(in_bits, j)));
    s.dist[e] = euclidean(population.z(i), population.z(j));
  }
  return s;
}

std::array<FeatureStats, 3> all_pair_static_stats(const DirectedGraph& graph, const Population& population) {
  if (graph.node_count() != population.size()) {
    throw IntegrityError("graph and population sizes differ");
  }
  const std::size_t n = graph.node_count();
  if (n < 2) throw ConfigError("cannot standardize features over fewer than two users");
  const std::size_t words = (n + 63) / 64;
  const auto out_bits = adjacency_bits(graph, words, true);
  const auto in_bits = adjacency_bits(graph, words, false);
  auto row = [words](const std::vector<std::uint64_t>& bits, UserId u) {
    return std::span<const std::uint64_t>(bits.data() + static_cast<std::size_t>(u) * words, words);
  };
  // All three features are symmetric, so the unordered pairs carry the same
  // moments as the ordered ones. Two passes keep the variance accurate
  // without holding n^2 values.
  auto visit = [&](auto&& fn) {
    for (UserId i = 0; i < n; ++i) {
      for (UserId j = i + 1; j < n; ++j) {
        fn(static_cast<double>(kernels::and_popcount(row(out_bits, i), row(out_bits, j))),
           static_cast<double>(kernels::and_popcount(row(in_bits, i), row(in_bits, j))),
           euclidean(population.z(i), population.z(j)));
      }
    }
  };
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  std::array<double, 3> sum{};
  visit([&](double a, double b, double c) {
    sum[0] += a;
    sum[1] += b;
    sum[2] += c;
  });
  std::array<FeatureStats, 3> out{};
  for (std::size_t f = 0; f < 3; ++f) out[f].mean = sum[f] / pairs;
  std::array<double, 3> dev{};
  visit([&](double a, double b, double c) {
    const double x[3] = {a - out[0].mean, b - out[1].mean, c - out[2].mean};
    for (std::size_t f = 0; f < 3; ++f) dev[f] += x[f] * x[f];
  });
  for (std::size_t f = 0; f < 3; ++f) out[f].stddev = std::sqrt(dev[f] / pairs);
  return out;
}

FeatureStats pad_with_zeros(const FeatureStats& s, std::size_t present, std::size_t cells) {
  if (cells < present || cells == 0) throw ConfigError("zero padding needs cells >= present > 0");
  const double w = static_cast<double>(present) / static_cast<double>(cells);
  FeatureStats out;
  out.mean = s.mean * w;
  const double var = (s.stddev * s.stddev + s.mean * s.mean) * w - out.mean * out.mean;
  out.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
  return out;
}

void update_interaction_counts(EdgeState& state, std::span<const EdgeUpdate> updates,
                               const EmaParams& params) {
  for (const auto& u : updates) {
    if (u.edge >= state.edge_count()) {
      throw IntegrityError("interaction update on unknown edge " + std::to_string(u.edge));
    }
  }
  const double keep = 1.0 - params.alpha;
  for (const auto& u : updates) {
    double& v = state.int_count[u.edge];
    v = params.alpha * (u.interacted ? 1.0 : 0.0) + keep * v;
  }
}

FeatureStats column_stats(std::span<const double> column) {
  if (column.empty()) throw ConfigError("cannot standardize features over zero edges");
  const double n = static_cast<double>(column.size());
  FeatureStats s;
  s.mean = kernels::lane_sum(column) / n;
  s.stddev = std::sqrt(kernels::lane_sum_sq_dev(column, s.mean) / n);
  return s;
}

StandardizedFeatures standardize(const EdgeState& state) {
  StandardizedFeatures out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const auto col = state.column(static_cast<Feature>(f));
    out.stats[f] = column_stats(col);
    out.columns[f].assign(col.size(), 0.0);
    if (out.stats[f].stddev > 0.0) {
      kernels::standardize(col, out.stats[f].mean, out.stats[f].stddev, out.columns[f]);
    }
  }
  return out;
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double tie_strength(const FeatureVector& f, const TieStrengthParams& params) {
  const auto& b = params.beta;
  const double partial = b[0] * f[0] + b[1] * f[1];
  const double logit = (partial + b[2] * f[2]) + b[3] * f[3];
  return logistic(logit);
}

void TieModel::CompensatedSum::add(double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    carry += (sum - t) + x;
  } else {
    carry += (x - t) + sum;
  }
  sum = t;
}

TieModel::TieModel(const DirectedGraph& graph, const Population& population, TieStrengthParams beta,
                   EmaParams ema, StatsMode mode, StandardizationScope scope)
    : state_(compute_static_features(graph, population)), beta_(beta), ema_(ema), mode_(mode), scope_(scope) {
  ema_.validate();
  const std::size_t edges = state_.edge_count();
  if (edges == 0) throw ConfigError("the follow graph has no edges");
  const std::size_t n = graph.node_count();
  cells_ = scope_ == StandardizationScope::AllPairs ? n * (n - 1) : edges;

  std::array<FeatureStats, 3> pair_stats{};
  if (scope_ == StandardizationScope::AllPairs) pair_stats = all_pair_static_stats(graph, population);
  std::array<std::vector<double>, 3> standardized;
  for (std::size_t f = 0; f < 3; ++f) {
    const auto col = state_.column(static_cast<Feature>(f));
    stats_[f] = scope_ == StandardizationScope::AllPairs ? pair_stats[f] : column_stats(col);
    standardized[f].assign(edges, 0.0);
    if (stats_[f].stddev > 0.0) {
      kernels::standardize(col, stats_[f].mean, stats_[f].stddev, standardized[f]);
    }
  }
  static_logit_.resize(edges);
  kernels::weighted_sum3(standardized[0], standardized[1], standardized[2], beta_.beta[0],
                         beta_.beta[1], beta_.beta[2], static_logit_);
  refresh_int_count_stats();
}

FeatureVector TieModel::standardized_features(EdgeId e) const {
  FeatureVector f{};
  f[0] = stats_[0].standardize(state_.out_edge[e]);
  f[1] = stats_[1].standardize(state_.in_edge[e]);
  f[2] = stats_[2].standardize(state_.dist[e]);
  f[3] = stats_[3].standardize(state_.int_count[e]);
  return f;
}

double TieModel::tie_strength(EdgeId e) const {
  const double ic = stats_[3].standardize(state_.int_count[e]);
  return logistic(static_logit_[e] + beta_.beta[3] * ic);
}

void TieModel::apply_step(std::span<const EdgeUpdate> updates) {
  for (const auto& u : updates) {
    if (u.edge >= state_.edge_count()) {
      throw IntegrityError("interaction update on unknown edge " + std::to_string(u.edge));
    }
  }
  const double keep = 1.0 - ema_.alpha;
  for (const auto& u : updates) {
    double& v = state_.int_count[u.edge];
    const double old = v;
    v = ema_.alpha * (u.interacted ? 1.0 : 0.0) + keep * old;
    sum_.add(v - old);
    sum_sq_.add(v * v - old * old);
  }
  refresh_int_count_stats();
}

void TieModel::refresh_int_count_stats() {
  if (mode_ == StatsMode::FullRecompute) {
    stats_[3] = recompute_int_count_stats();
    return;
  }
  const double n = static_cast<double>(cells_);
  const double mean = sum_.value() / n;
  const double var = sum_sq_.value() / n - mean * mean;
  stats_[3].mean = mean;
  stats_[3].stddev = var > 0.0 ? std::sqrt(var) : 0.0;
}

FeatureStats TieModel::recompute_int_count_stats() const {
  const FeatureStats edges = column_stats(state_.int_count);
  return cells_ == state_.edge_count() ? edges : pad_with_zeros(edges, state_.edge_count(), cells_);
}

bool score_candidates(PolicyKind policy, UserId viewer, std::span<const Candidate> candidates,
                      const ScoringContext& ctx, std::vector<double>& out) {
  out.clear();
  if (candidates.empty()) return false;
  for (const auto& c : candidates) {
    if (c.edge >= ctx.graph.edge_count() || ctx.graph.edge_source(c.edge) != viewer ||
        ctx.graph.edge_target(c.edge) != c.creator) {
      throw IntegrityError("candidate " + std::to_string(c.content) + " from user " +
                           std::to_string(c.creator) + " is not followed by viewer " +
                           std::to_string(viewer));
    }
  }
  if (policy == PolicyKind::RealGraph && ctx.ties == nullptr) {
    throw IntegrityError("RealGraph scoring needs a tie model");
  }

  const TopicVector& prefs = ctx.population.preference_distribution(viewer);
  out.reserve(candidates.size());
  double total = 0.0;
  for (const auto& c : candidates) {
    double s = 1.0;
    switch (policy) {
      case PolicyKind::Random: break;
      case PolicyKind::TopicMatch: s = prefs[index(c.topic)]; break;
      case PolicyKind::RealGraph: s = 0.5 * (prefs[index(c.topic)] + ctx.ties->tie_strength(c.edge)); break;
    }
    out.push_back(s);
    total += s;
  }
  for (double& s : out) s /= total;
  return true;
}

std::array<TieSummaryRow, 2> summarize_ties(Step t, const TieModel& ties, const DirectedGraph& graph,
                                            const Population& population) {
  std::array<double, 2> ic{0.0, 0.0};
  std::array<double, 2> ts{0.0, 0.0};
  std::array<std::size_t, 2> count{0, 0};
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const std::size_t cls =
        population.group(graph.edge_source(e)) == population.group(graph.edge_target(e)) ? 0 : 1;
    ic[cls] += ties.state().int_count[e];
    ts[cls] += ties.tie_strength(e);
    ++count[cls];
  }
  std::array<TieSummaryRow, 2> rows{};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const double c = count[cls] > 0 ? static_cast<double>(count[cls]) : std::nan("");
    rows[cls] = TieSummaryRow{t, cls == 0, ic[cls] / c, ts[cls] / c};
  }
  return rows;
}

void write_tie_summary_csv(std::ostream& out, std::span<const TieSummaryRow> rows) {
  out << "t,pair_class,mean_int_count,mean_tie_strength\n";
  csv::Writer w(out);
  for (const auto& r : rows) {
    w.field(r.t).field(r.in_group ? "in_group" : "cross_group").field(r.mean_int_count).field(r.mean_tie_strength);
    w.end_row();
  }
}

}  // namespace feedloop
