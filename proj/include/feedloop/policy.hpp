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

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "feedloop/netgen.hpp"
#include "feedloop/population.hpp"

namespace feedloop {

enum class PolicyKind : std::uint8_t { Random, TopicMatch, RealGraph };
std::string_view to_string(PolicyKind p);
std::optional<PolicyKind> parse_policy(std::string_view s);

/// Logistic coefficients for (common out-edges, common in-edges, preference
/// distance, interaction count).
struct TieStrengthParams {
  std::array<double, 4> beta{1.0, 1.0, -1.0, 5.0};
};

struct EmaParams {
  double alpha = 0.01;
  void validate() const;
};

enum class Feature : std::size_t { OutEdge = 0, InEdge = 1, Distance = 2, IntCount = 3 };
inline constexpr std::size_t kNumFeatures = 4;
using FeatureVector = std::array<double, kNumFeatures>;

/// Population (not sample) moments of one feature column.
struct FeatureStats {
  double mean = 0.0;
  double stddev = 0.0;

  /// z-score; a constant column standardizes to 0.
  double standardize(double x) const { return stddev > 0.0 ? (x - mean) / stddev : 0.0; }
};

/// Per-edge features, indexed by EdgeId. The first three never change after
/// construction; int_count is the smoothed interaction history.
struct EdgeState {
  std::vector<double> out_edge;  // |out(i) ∩ out(j)|
  std::vector<double> in_edge;   // |in(i) ∩ in(j)|
  std::vector<double> dist;      // ||z_i - z_j||, raw preferences
  std::vector<double> int_count;

  std::size_t edge_count() const { return int_count.size(); }
  std::span<const double> column(Feature f) const;
};

/// Static features for every edge i -> j; int_count starts at 0.
EdgeState compute_static_features(const DirectedGraph& graph, const Population& population);

/// One served recommendation on edge (viewer -> creator).
struct EdgeUpdate {
  EdgeId edge;
  bool interacted;
};

/// Exponential smoothing of interactions on the edges that were served this
/// step; other edges keep their value. Throws IntegrityError for unknown edges.
void update_interaction_counts(EdgeState& state, std::span<const EdgeUpdate> updates,
                               const EmaParams& params);

/// Two-pass moments. Throws ConfigError on an empty column.
FeatureStats column_stats(std::span<const double> column);

struct StandardizedFeatures {
  std::array<FeatureStats, kNumFeatures> stats;
  std::array<std::vector<double>, kNumFeatures> columns;
};

/// z-scores every feature column across the full edge set.
StandardizedFeatures standardize(const EdgeState& state);

/// Cells a feature column is z-scored over.
enum class StandardizationScope : std::uint8_t {
  AllPairs,     // every ordered pair i != j; non-edges have int_count 0
  FollowEdges,  // follow edges only
};
std::string_view to_string(StandardizationScope s);
std::optional<StandardizationScope> parse_scope(std::string_view s);

/// Moments of out_edge, in_edge and dist over every ordered pair i != j.
/// O(n^2 n / 64). Throws ConfigError for fewer than two users.
std::array<FeatureStats, 3> all_pair_static_stats(const DirectedGraph& graph, const Population& population);

/// Moments of a column of `present` values after appending zeros up to
/// `cells` entries.
FeatureStats pad_with_zeros(const FeatureStats& s, std::size_t present, std::size_t cells);

double logistic(double x);

/// logistic(beta . f), with the dot product accumulated left to right.
double tie_strength(const FeatureVector& standardized, const TieStrengthParams& params);

enum class StatsMode : std::uint8_t {
  Incremental,    // O(updates) per step
  FullRecompute,  // O(E) per step
};

/// Owns the EdgeState of one run and keeps the standardization current.
///
/// Static columns are standardized once and folded into a cached partial
/// logit per edge. The int_count mean/variance are maintained from running
/// compensated sums, so a step costs O(recommendations); FullRecompute
/// rescans the column after every step instead.
class TieModel {
 public:
  TieModel(const DirectedGraph& graph, const Population& population, TieStrengthParams beta,
           EmaParams ema, StatsMode mode = StatsMode::Incremental,
           StandardizationScope scope = StandardizationScope::AllPairs);

  const EdgeState& state() const { return state_; }
  std::size_t edge_count() const { return state_.edge_count(); }
  const TieStrengthParams& params() const { return beta_; }
  const EmaParams& ema() const { return ema_; }
  StatsMode mode() const { return mode_; }
  StandardizationScope scope() const { return scope_; }
  /// Number of cells the statistics range over.
  std::size_t cell_count() const { return cells_; }

  const std::array<FeatureStats, kNumFeatures>& stats() const { return stats_; }
  FeatureVector standardized_features(EdgeId e) const;
  double tie_strength(EdgeId e) const;

  void apply_step(std::span<const EdgeUpdate> updates);

  /// O(E) moments of the current int_count column over the model's scope,
  /// for cross-checking.
  FeatureStats recompute_int_count_stats() const;

 private:
  // Neumaier summation.
  struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x);
    double value() const { return sum + carry; }
  };

  void refresh_int_count_stats();

  EdgeState state_;
  TieStrengthParams beta_;
  EmaParams ema_;
  StatsMode mode_;
  StandardizationScope scope_;
  std::size_t cells_ = 0;
  std::array<FeatureStats, kNumFeatures> stats_{};
  std::vector<double> static_logit_;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

/// A piece of content eligible for one viewer, tagged with the follow edge
/// viewer -> creator it arrives through.
struct Candidate {
  ContentId content;
  UserId creator;
  Topic topic;
  EdgeId edge;
};

/// Read-only view of everything a policy may consult.
struct ScoringContext {
  const Population& population;
  const DirectedGraph& graph;
  const TieModel* ties = nullptr;  // required for RealGraph
};

/// Writes a sampling distribution over `candidates` into `out` (sums to 1).
/// Returns false and leaves `out` empty when there are no candidates.
/// Throws IntegrityError if a candidate's creator is not followed by viewer.
bool score_candidates(PolicyKind policy, UserId viewer, std::span<const Candidate> candidates,
                      const ScoringContext& ctx, std::vector<double>& out);

struct TieSummaryRow {
  Step t;
  bool in_group;
  double mean_int_count;
  double mean_tie_strength;
};

/// Means over all edges of each pair class. O(E).
std::array<TieSummaryRow, 2> summarize_ties(Step t, const TieModel& ties, const DirectedGraph& graph,
                                            const Population& population);

/// `t,pair_class,mean_int_count,mean_tie_strength`
void write_tie_summary_csv(std::ostream& out, std::span<const TieSummaryRow> rows);

}  // namespace feedloop
