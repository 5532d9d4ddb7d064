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

#include "feedloop/netgen.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

DirectedGraph::DirectedGraph(std::size_t n, std::vector<std::pair<UserId, UserId>> edges) : n_(n) {
  for (const auto& [s, d] : edges) {
    if (s >= n || d >= n) {
      throw IntegrityError("edge " + std::to_string(s) + "->" + std::to_string(d) +
                           " out of range for n=" + std::to_string(n));
    }
    if (s == d) throw IntegrityError("self-loop on node " + std::to_string(s));
  }
  if (!std::is_sorted(edges.begin(), edges.end())) std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  out_targets_.reserve(edges.size());
  edge_sources_.reserve(edges.size());
  for (const auto& [s, d] : edges) {
    ++out_offsets_[s + 1];
    ++in_offsets_[d + 1];
    out_targets_.push_back(d);
    edge_sources_.push_back(s);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  // Filling in-lists in edge-id order leaves each list sorted by source.
  in_sources_.resize(edges.size());
  in_edge_ids_.resize(edges.size());
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const UserId d = out_targets_[e];
    in_sources_[cursor[d]] = edge_sources_[e];
    in_edge_ids_[cursor[d]] = static_cast<EdgeId>(e);
    ++cursor[d];
  }
}

std::optional<EdgeId> DirectedGraph::find_edge(UserId src, UserId dst) const {
  if (src >= n_ || dst >= n_) return std::nullopt;
  const auto out = out_neighbors(src);
  const auto it = std::lower_bound(out.begin(), out.end(), dst);
  if (it == out.end() || *it != dst) return std::nullopt;
  return static_cast<EdgeId>(out_offsets_[src] + static_cast<std::size_t>(it - out.begin()));
}

double SbmParams::probability(Group from, Group to) const {
  if (from == Group::Majority) return to == Group::Majority ? maj_maj : maj_min;
  return to == Group::Minority ? min_min : min_maj;
}

void SbmParams::validate() const {
  for (double p : {maj_maj, min_min, maj_min, min_maj}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("graph.sbm probabilities must lie in [0, 1]");
  }
}

namespace {

template <typename ProbabilityFn>
DirectedGraph sample_pairs(std::size_t n, ProbabilityFn&& probability, Rng& rng) {
  std::vector<std::pair<UserId, UserId>> edges;
  for (UserId i = 0; i < n; ++i) {
    for (UserId j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform() < probability(i, j)) edges.emplace_back(i, j);
    }
  }
  return DirectedGraph(n, std::move(edges));
}

}  // namespace

DirectedGraph complete_graph(std::size_t n) {
  if (n < 2) throw ConfigError("complete graph needs n >= 2");
  std::vector<std::pair<UserId, UserId>> edges;
  edges.reserve(n * (n - 1));
  for (UserId i = 0; i < n; ++i) {
    for (UserId j = 0; j < n; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph random_graph(std::size_t n, const RandomGraphParams& params, Rng& rng) {
  if (n < 2) throw ConfigError("random graph needs n >= 2");
  if (!(params.p_edge >= 0.0 && params.p_edge <= 1.0)) {
    throw ConfigError("graph.p_edge must lie in [0, 1]");
  }
  return sample_pairs(n, [p = params.p_edge](UserId, UserId) { return p; }, rng);
}

DirectedGraph sbm_graph(const Population& population, const SbmParams& params, Rng& rng) {
  if (population.size() == 0) throw ConfigError("stochastic block model needs a non-empty population");
  params.validate();
  return sample_pairs(
      population.size(),
      [&](UserId i, UserId j) { return params.probability(population.group(i), population.group(j)); },
      rng);
}

double FollowerComposition::share(Group g, Direction d, Group h) const {
  for (const auto& r : rows) {
    if (r.group == g && r.direction == d) {
      return h == Group::Majority ? r.share_majority : r.share_minority;
    }
  }
  throw UndefinedStatistic("composition row missing");
}

FollowerComposition follower_composition(const DirectedGraph& graph, const Population& population) {
  if (graph.node_count() != population.size()) {
    throw IntegrityError("graph and population sizes differ");
  }
  FollowerComposition result;
  std::size_t in_group_edges = 0;
  for (Group g : kGroups) {
    if (population.count(g) == 0) {
      throw UndefinedStatistic(std::string("no users in the ") + std::string(to_string(g)) + " group");
    }
    for (Direction d : {Direction::In, Direction::Out}) {
      double sum_majority = 0.0;
      double sum_minority = 0.0;
      std::size_t counted = 0;
      for (const auto& u : population.users()) {
        if (u.group != g) continue;
        const auto nbrs = d == Direction::In ? graph.in_neighbors(u.id) : graph.out_neighbors(u.id);
        if (nbrs.empty()) continue;
        std::size_t minority = 0;
        for (UserId v : nbrs) minority += population.group(v) == Group::Minority;
        const double total = static_cast<double>(nbrs.size());
        sum_minority += static_cast<double>(minority) / total;
        sum_majority += static_cast<double>(nbrs.size() - minority) / total;
        ++counted;
      }
      CompositionRow row{g, d, 0.0, 0.0, counted};
      if (counted > 0) {
        row.share_majority = sum_majority / static_cast<double>(counted);
        row.share_minority = sum_minority / static_cast<double>(counted);
      }
      result.rows.push_back(row);
    }
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    in_group_edges += population.group(graph.edge_source(e)) == population.group(graph.edge_target(e));
  }
  if (graph.edge_count() > 0) {
    result.in_group_edge_share =
        static_cast<double>(in_group_edges) / static_cast<double>(graph.edge_count());
  }
  return result;
}

std::vector<EdgeHistogramRow> edge_histogram(const DirectedGraph& graph, const Population& population) {
  std::vector<EdgeHistogramRow> rows;
  rows.reserve(graph.node_count());
  for (UserId u = 0; u < graph.node_count(); ++u) {
    EdgeHistogramRow r{u, population.group(u), 0, 0, 0, 0};
    for (UserId v : graph.out_neighbors(u)) {
      (population.group(v) == Group::Minority ? r.out_to_minority : r.out_to_majority)++;
    }
    for (UserId v : graph.in_neighbors(u)) {
      (population.group(v) == Group::Minority ? r.in_from_minority : r.in_from_majority)++;
    }
    rows.push_back(r);
  }
  return rows;
}

void write_edge_list_csv(std::ostream& out, const DirectedGraph& graph) {
  out << "src,dst\n";
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    out << graph.edge_source(e) << ',' << graph.edge_target(e) << '\n';
  }
}

DirectedGraph read_edge_list_csv(std::istream& in, std::size_t n) {
  csv::expect_header(in, "src,dst");
  std::vector<std::pair<UserId, UserId>> edges;
  std::string line;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 2) throw IoError("edge row '" + line + "' must have two fields");
    edges.emplace_back(static_cast<UserId>(csv::parse_uint(f[0])),
                       static_cast<UserId>(csv::parse_uint(f[1])));
  }
  try {
    return DirectedGraph(n, std::move(edges));
  } catch (const IntegrityError& e) {
    throw IoError(std::string("invalid edge list: ") + e.what());
  }
}

void write_composition_csv(std::ostream& out, const FollowerComposition& composition) {
  out << "group,direction,share_majority,share_minority\n";
  csv::Writer w(out);
  for (const auto& r : composition.rows) {
    w.field(to_string(r.group)).field(to_string(r.direction));
    if (r.users_counted > 0) {
      w.field(r.share_majority).field(r.share_minority);
    } else {
      w.field(csv::kUndefined).field(csv::kUndefined);
    }
    w.end_row();
  }
}

void write_edge_histogram_csv(std::ostream& out, std::span<const EdgeHistogramRow> rows) {
  out << "user_id,group,out_to_majority,out_to_minority,in_from_majority,in_from_minority\n";
  csv::Writer w(out);
  for (const auto& r : rows) {
    w.field(r.user).field(to_string(r.group));
    w.field(static_cast<std::uint64_t>(r.out_to_majority)).field(static_cast<std::uint64_t>(r.out_to_minority));
    w.field(static_cast<std::uint64_t>(r.in_from_majority)).field(static_cast<std::uint64_t>(r.in_from_minority));
    w.end_row();
  }
}

}  // namespace feedloop
