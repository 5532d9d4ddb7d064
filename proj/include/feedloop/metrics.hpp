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
#include <string>
#include <vector>

#include "feedloop/engine.hpp"
#include "feedloop/netgen.hpp"
#include "feedloop/population.hpp"
#include "feedloop/stats.hpp"

namespace feedloop {

struct MetricsConfig {
  Step burn_in = 2500;
  std::size_t ma_window_ratio = 1000;
  std::size_t ma_window_gap = 100;

  /// Throws ConfigError; burn_in must be below `steps` when steps > 0.
  void validate(Step steps) const;
};

/// Values aligned with step indices. Undefined points (zero denominators)
/// are nullopt and never silently read as 0.
struct TimeSeries {
  std::vector<Step> t;
  std::vector<std::optional<double>> v;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  void push(Step step, std::optional<double> value) {
    t.push_back(step);
    v.push_back(value);
  }
  std::size_t defined_count() const;
  /// Mean of the defined points.
  std::optional<double> mean() const;
  /// Points with t >= from.
  TimeSeries slice_from(Step from) const;
};

/// Trailing mean over the last min(window, defined points so far) defined
/// values. Undefined inputs stay undefined in the output and never enter a
/// window.
TimeSeries moving_average(const TimeSeries& series, std::size_t window);

/// Mean over runs of per-run series, point by point over runs where the
/// point is defined. Series are matched by step index.
TimeSeries mean_over_runs(std::span<const TimeSeries> runs);

/// OLS slope of value against step over defined points.
std::optional<double> trend_slope(const TimeSeries& series);

/// Per-run trend slopes tested against zero across runs.
MeanTest trend_test(std::span<const TimeSeries> runs);

enum class RatioNormalization : std::uint8_t {
  PerCapita,  // professional recs of a group's content / group size
  PerItem,    // professional recs of a group's content / professional items it created that step
};

/// Minority/majority ratio of per-step professional recommendation rates,
/// moving-averaged (window ma_window_ratio) and reported from burn_in on.
TimeSeries professional_rec_ratio(const EventLog& log, const Population& population,
                                  const MetricsConfig& config,
                                  RatioNormalization normalization = RatioNormalization::PerCapita);

/// Mean smoothed interaction count of in-group minus cross-group
/// (viewer, creator) pairs served professional content, as the count stood
/// when the step's recommendations were scored. The smoothed counts are
/// replayed from the log. Moving average with window ma_window_gap, all steps.
TimeSeries interaction_gap(const EventLog& log, const Population& population, const DirectedGraph& graph,
                           double alpha, const MetricsConfig& config);

enum class ReceiverFilter : std::uint8_t { All, Minority, Majority };
std::string_view to_string(ReceiverFilter f);

struct TopicShare {
  Topic topic;
  ReceiverFilter receiver;
  std::optional<double> rec_share_minority;       // of recs with this topic, minority-created
  std::optional<double> creation_share_minority;  // of items with this topic, minority-created
  std::size_t recs;
  std::size_t created;
};

/// Post-burn-in shares per topic. A topic with no recs under the filter has
/// an undefined share.
std::vector<TopicShare> minority_share_by_topic(const EventLog& log, const Population& population,
                                                ReceiverFilter filter, Step burn_in);

struct CrossGroupRow {
  UserId user;
  double professional_recs_to_majority;
  double professional_recs_total;
  double professional_items;  // created post-burn-in
  double majority_followers;
  double majority_following;
  TopicVector z;

  /// Mean recommendations to majority viewers per professional item; the
  /// correlation response. Undefined for users with no professional items.
  std::optional<double> response() const {
    if (professional_items <= 0.0) return std::nullopt;
    return professional_recs_to_majority / professional_items;
  }
};

/// One row per minority user, post-burn-in.
std::vector<CrossGroupRow> per_user_cross_group_visibility(const EventLog& log, const Population& population,
                                                           const DirectedGraph& graph, Step burn_in);

/// Pooled share of minority-created professional recs that went to majority viewers.
std::optional<double> cross_group_professional_share(std::span<const CrossGroupRow> rows);

struct NamedCorrelation {
  std::string covariate;
  std::optional<CorrelationResult> result;  // nullopt when undefined
};

/// Pearson correlation of each covariate with CrossGroupRow::response(),
/// over rows where the response is defined.
std::vector<NamedCorrelation> cross_group_correlations(std::span<const CrossGroupRow> rows);

struct RecsVsInDegreeRow {
  UserId user;
  Group group;
  Topic topic;
  double in_degree;
  double recs_per_item;
};

struct RecsVsInDegreeFit {
  Topic topic;
  Group group;
  std::optional<LinearFit> fit;  // nullopt when in-degrees do not vary
};

/// Rows for users who created at least one post-burn-in item of the topic.
std::vector<RecsVsInDegreeRow> recs_vs_incoming_edges(const EventLog& log, const Population& population,
                                                      const DirectedGraph& graph, Step burn_in);
std::vector<RecsVsInDegreeFit> fit_recs_vs_incoming_edges(std::span<const RecsVsInDegreeRow> rows);

/// Every per-run statistic the experiment harness writes out.
struct RunMetrics {
  TimeSeries ratio;
  TimeSeries ratio_per_item;
  TimeSeries gap;
  std::vector<TopicShare> topic_shares;  // All, Minority, Majority receivers
  std::vector<CrossGroupRow> per_user;
  std::optional<double> cross_group_share;
  std::vector<NamedCorrelation> correlations;
  std::vector<RecsVsInDegreeRow> recs_vs_in;
  std::vector<RecsVsInDegreeFit> recs_vs_in_fits;
  FollowerComposition composition;
};

RunMetrics compute_run_metrics(const EventLog& log, const Population& population, const DirectedGraph& graph,
                               double alpha, const MetricsConfig& config);

// CSV emitters.
void write_series_csv(std::ostream& out, const TimeSeries& series, std::string_view value_name);
TimeSeries read_series_csv(std::istream& in, std::string* value_name = nullptr);
void write_topic_shares_csv(std::ostream& out, std::span<const TopicShare> shares);
void write_per_user_csv(std::ostream& out, std::span<const CrossGroupRow> rows);
void write_correlations_csv(std::ostream& out, std::span<const NamedCorrelation> rows);
void write_recs_vs_in_csv(std::ostream& out, std::span<const RecsVsInDegreeRow> rows);
void write_recs_vs_in_fits_csv(std::ostream& out, std::span<const RecsVsInDegreeFit> fits);

}  // namespace feedloop
