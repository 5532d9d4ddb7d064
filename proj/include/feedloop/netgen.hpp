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

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "feedloop/population.hpp"
#include "feedloop/rng.hpp"
#include "feedloop/types.hpp"

namespace feedloop {

/// Fixed follow relation. An edge i -> j means i follows j; j's content is
/// then eligible for i's feed.
///
/// Storage is CSR in both directions. Edge ids enumerate the out-adjacency
/// in (src, dst) order, so edge id == position in the out arrays.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  /// Edges may arrive in any order; duplicates are merged. Self-loops or
  /// out-of-range endpoints throw IntegrityError.
  DirectedGraph(std::size_t n, std::vector<std::pair<UserId, UserId>> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return out_targets_.size(); }

  /// Accounts `u` follows, ascending.
  std::span<const UserId> out_neighbors(UserId u) const {
    return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
  }
  /// Followers of `u`, ascending.
  std::span<const UserId> in_neighbors(UserId u) const {
    return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
  }
  /// Edge ids aligned with in_neighbors(u): in_edge_ids(u)[k] is the id of
  /// in_neighbors(u)[k] -> u.
  std::span<const EdgeId> in_edge_ids(UserId u) const {
    return {in_edge_ids_.data() + in_offsets_[u], in_edge_ids_.data() + in_offsets_[u + 1]};
  }
  EdgeId first_out_edge(UserId u) const { return static_cast<EdgeId>(out_offsets_[u]); }

  UserId edge_source(EdgeId e) const { return edge_sources_[e]; }
  UserId edge_target(EdgeId e) const { return out_targets_[e]; }

  std::optional<EdgeId> find_edge(UserId src, UserId dst) const;
  bool has_edge(UserId src, UserId dst) const { return find_edge(src, dst).has_value(); }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<UserId> out_targets_;
  std::vector<UserId> edge_sources_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<UserId> in_sources_;
  std::vector<EdgeId> in_edge_ids_;
};

struct RandomGraphParams {
  double p_edge = 0.5;
};

/// Edge probability by (follower group, followee group).
struct SbmParams {
  double maj_maj = 0.4;
  double min_min = 0.5;
  double maj_min = 0.1;
  double min_maj = 0.1;

  double probability(Group from, Group to) const;
  void validate() const;
};

DirectedGraph complete_graph(std::size_t n);
/// Each ordered pair (i, j), i != j, is drawn once, row-major.
DirectedGraph random_graph(std::size_t n, const RandomGraphParams& params, Rng& rng);
DirectedGraph sbm_graph(const Population& population, const SbmParams& params, Rng& rng);

enum class Direction : std::uint8_t { In, Out };  // In = followers, Out = following
constexpr std::string_view to_string(Direction d) { return d == Direction::In ? "in" : "out"; }

struct CompositionRow {
  Group group;
  Direction direction;
  double share_majority;
  double share_minority;
  std::size_t users_counted;  // users with at least one neighbor in this direction
};

struct FollowerComposition {
  std::vector<CompositionRow> rows;  // (majority, in), (majority, out), (minority, in), (minority, out)
  double in_group_edge_share = 0.0;  // fraction of all edges joining equal groups

  /// Mean over users of `g` of the fraction of their neighbors in `h`.
  double share(Group g, Direction d, Group h) const;
};

/// Users with no neighbors in a direction are left out of that mean.
/// Throws UndefinedStatistic when a group is empty.
FollowerComposition follower_composition(const DirectedGraph& graph, const Population& population);

struct EdgeHistogramRow {
  UserId user;
  Group group;
  std::size_t out_to_majority;
  std::size_t out_to_minority;
  std::size_t in_from_majority;
  std::size_t in_from_minority;
};

std::vector<EdgeHistogramRow> edge_histogram(const DirectedGraph& graph, const Population& population);

/// `src,dst` sorted by (src, dst).
void write_edge_list_csv(std::ostream& out, const DirectedGraph& graph);
DirectedGraph read_edge_list_csv(std::istream& in, std::size_t n);
/// `group,direction,share_majority,share_minority`
void write_composition_csv(std::ostream& out, const FollowerComposition& composition);
void write_edge_histogram_csv(std::ostream& out, std::span<const EdgeHistogramRow> rows);

}  // namespace feedloop
