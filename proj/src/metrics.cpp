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

#include "feedloop/metrics.hpp"

#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

void MetricsConfig::validate(Step steps) const {
  if (ma_window_ratio < 1 || ma_window_gap < 1) throw ConfigError("metrics windows must be >= 1");
  if (steps > 0 && burn_in >= steps) {
    throw ConfigError("metrics.burn_in (" + std::to_string(burn_in) + ") must be below engine.steps (" +
                      std::to_string(steps) + ")");
  }
}

std::size_t TimeSeries::defined_count() const {
  std::size_t c = 0;
  for (const auto& x : v) c += x.has_value();
  return c;
}

std::optional<double> TimeSeries::mean() const {
  double s = 0.0;
  std::size_t c = 0;
  for (const auto& x : v) {
    if (x) {
      s += *x;
      ++c;
    }
  }
  if (c == 0) return std::nullopt;
  return s / static_cast<double>(c);
}

TimeSeries TimeSeries::slice_from(Step from) const {
  TimeSeries out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= from) out.push(t[i], v[i]);
  }
  return out;
}

TimeSeries moving_average(const TimeSeries& series, std::size_t window) {
  if (window < 1) throw ConfigError("moving average window must be >= 1");
  TimeSeries out;
  std::deque<double> recent;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.v[i]) {
      out.push(series.t[i], std::nullopt);
      continue;
    }
    recent.push_back(*series.v[i]);
    if (recent.size() > window) recent.pop_front();
    // Summed afresh each point: no running-sum drift, exact for window 1.
    double sum = 0.0;
    for (double x : recent) sum += x;
    out.push(series.t[i], sum / static_cast<double>(recent.size()));
  }
  return out;
}

TimeSeries mean_over_runs(std::span<const TimeSeries> runs) {
  std::map<Step, std::pair<double, std::size_t>> acc;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.size(); ++i) {
      auto& slot = acc[run.t[i]];
      if (run.v[i]) {
        slot.first += *run.v[i];
        ++slot.second;
      }
    }
  }
  TimeSeries out;
  for (const auto& [t, s] : acc) {
    out.push(t, s.second > 0 ? std::optional<double>(s.first / static_cast<double>(s.second)) : std::nullopt);
  }
  return out;
}

std::optional<double> trend_slope(const TimeSeries& series) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.v[i]) {
      x.push_back(static_cast<double>(series.t[i]));
      y.push_back(*series.v[i]);
    }
  }
  const auto fit = least_squares(x, y);
  if (!fit) return std::nullopt;
  return fit->slope;
}

MeanTest trend_test(std::span<const TimeSeries> runs) {
  std::vector<double> slopes;
  for (const auto& r : runs) {
    if (const auto s = trend_slope(r)) slopes.push_back(*s);
  }
  return one_sample_t_test(slopes);
}

namespace {

void require_groups(const Population& population) {
  for (Group g : kGroups) {
    if (population.count(g) == 0) {
      throw ConfigError("the " + std::string(to_string(g)) + " group is empty");
    }
  }
}

Group creator_group(const EventLog& log, const Population& population, ContentId c) {
  if (c >= log.content.size()) throw IntegrityError("recommendation of unknown content " + std::to_string(c));
  return population.group(log.content[c].creator);
}

}  // namespace

TimeSeries professional_rec_ratio(const EventLog& log, const Population& population,
                                  const MetricsConfig& config, RatioNormalization normalization) {
  require_groups(population);
  const Step steps = log.steps;
  std::vector<std::array<double, 2>> recs(steps, {0.0, 0.0});
  std::vector<std::array<double, 2>> denom(steps, {0.0, 0.0});
  for (const auto& r : log.recs) {
    if (r.step >= steps) throw IntegrityError("recommendation after the final step");
    const Group g = creator_group(log, population, r.content);
    if (log.item(r.content).topic == Topic::Professional) recs[r.step][index(g)] += 1.0;
  }
  if (normalization == RatioNormalization::PerCapita) {
    for (auto& d : denom) {
      d[0] = static_cast<double>(population.count(Group::Majority));
      d[1] = static_cast<double>(population.count(Group::Minority));
    }
  } else {
    for (const auto& c : log.content) {
      if (c.topic == Topic::Professional && c.created_at < steps) {
        denom[c.created_at][index(population.group(c.creator))] += 1.0;
      }
    }
  }
  TimeSeries raw;
  for (Step t = 0; t < steps; ++t) {
    const auto& d = denom[t];
    std::optional<double> value;
    if (d[0] > 0.0 && d[1] > 0.0) {
      const double majority_rate = recs[t][0] / d[0];
      const double minority_rate = recs[t][1] / d[1];
      if (majority_rate > 0.0) value = minority_rate / majority_rate;
    }
    raw.push(t, value);
  }
  return moving_average(raw, config.ma_window_ratio).slice_from(config.burn_in);
}

TimeSeries interaction_gap(const EventLog& log, const Population& population, const DirectedGraph& graph,
                           double alpha, const MetricsConfig& config) {
  std::vector<double> int_count(graph.edge_count(), 0.0);
  std::vector<std::pair<EdgeId, bool>> served;
  TimeSeries raw;
  std::size_t r = 0;
  for (Step t = 0; t < log.steps; ++t) {
    served.clear();
    double sum_in = 0.0;
    double sum_cross = 0.0;
    std::size_t n_in = 0;
    std::size_t n_cross = 0;
    for (; r < log.recs.size() && log.recs[r].step == t; ++r) {
      const auto& rec = log.recs[r];
      const ContentItem& item = log.item(rec.content);
      const auto edge = graph.find_edge(rec.viewer, item.creator);
      if (!edge) {
        throw IntegrityError("recommendation to " + std::to_string(rec.viewer) + " from unfollowed user " +
                             std::to_string(item.creator));
      }
      served.emplace_back(*edge, rec.interacted);
      if (item.topic != Topic::Professional) continue;
      if (population.group(rec.viewer) == population.group(item.creator)) {
        sum_in += int_count[*edge];
        ++n_in;
      } else {
        sum_cross += int_count[*edge];
        ++n_cross;
      }
    }
    std::optional<double> gap;
    if (n_in > 0 && n_cross > 0) {
      gap = sum_in / static_cast<double>(n_in) - sum_cross / static_cast<double>(n_cross);
    }
    raw.push(t, gap);
    for (const auto& [e, interacted] : served) {
      int_count[e] = alpha * (interacted ? 1.0 : 0.0) + (1.0 - alpha) * int_count[e];
    }
  }
  if (r != log.recs.size()) throw IntegrityError("recommendation events are not ordered by step");
  return moving_average(raw, config.ma_window_gap);
}

std::string_view to_string(ReceiverFilter f) {
  switch (f) {
    case ReceiverFilter::All: return "all";
    case ReceiverFilter::Minority: return "minority";
    case ReceiverFilter::Majority: return "majority";
  }
  return "?";
}

std::vector<TopicShare> minority_share_by_topic(const EventLog& log, const Population& population,
                                                ReceiverFilter filter, Step burn_in) {
  std::array<std::size_t, kNumTopics> recs{};
  std::array<std::size_t, kNumTopics> recs_min{};
  std::array<std::size_t, kNumTopics> created{};
  std::array<std::size_t, kNumTopics> created_min{};
  for (const auto& r : log.recs) {
    if (r.step < burn_in) continue;
    const Group receiver = population.group(r.viewer);
    if (filter == ReceiverFilter::Minority && receiver != Group::Minority) continue;
    if (filter == ReceiverFilter::Majority && receiver != Group::Majority) continue;
    const std::size_t k = index(log.item(r.content).topic);
    ++recs[k];
    recs_min[k] += creator_group(log, population, r.content) == Group::Minority;
  }
  for (const auto& c : log.content) {
    if (c.created_at < burn_in) continue;
    ++created[index(c.topic)];
    created_min[index(c.topic)] += population.group(c.creator) == Group::Minority;
  }
  std::vector<TopicShare> out;
  for (Topic topic : kTopics) {
    const std::size_t k = index(topic);
    TopicShare s{topic, filter, std::nullopt, std::nullopt, recs[k], created[k]};
    if (recs[k] > 0) s.rec_share_minority = static_cast<double>(recs_min[k]) / static_cast<double>(recs[k]);
    if (created[k] > 0) {
      s.creation_share_minority = static_cast<double>(created_min[k]) / static_cast<double>(created[k]);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CrossGroupRow> per_user_cross_group_visibility(const EventLog& log, const Population& population,
                                                           const DirectedGraph& graph, Step burn_in) {
  std::vector<double> to_majority(population.size(), 0.0);
  std::vector<double> total(population.size(), 0.0);
  std::vector<double> items(population.size(), 0.0);
  for (const auto& c : log.content) {
    if (c.created_at >= burn_in && c.topic == Topic::Professional) items[c.creator] += 1.0;
  }
  for (const auto& r : log.recs) {
    if (r.step < burn_in) continue;
    const ContentItem& item = log.item(r.content);
    if (item.topic != Topic::Professional) continue;
    total[item.creator] += 1.0;
    if (population.group(r.viewer) == Group::Majority) to_majority[item.creator] += 1.0;
  }
  std::vector<CrossGroupRow> rows;
  for (const auto& u : population.users()) {
    if (u.group != Group::Minority) continue;
    double followers = 0.0;
    double following = 0.0;
    for (UserId v : graph.in_neighbors(u.id)) followers += population.group(v) == Group::Majority;
    for (UserId v : graph.out_neighbors(u.id)) following += population.group(v) == Group::Majority;
    rows.push_back(CrossGroupRow{u.id, to_majority[u.id], total[u.id], items[u.id], followers, following, u.z});
  }
  return rows;
}

std::optional<double> cross_group_professional_share(std::span<const CrossGroupRow> rows) {
  double to_majority = 0.0;
  double total = 0.0;
  for (const auto& r : rows) {
    to_majority += r.professional_recs_to_majority;
    total += r.professional_recs_total;
  }
  if (total <= 0.0) return std::nullopt;
  return to_majority / total;
}

std::vector<NamedCorrelation> cross_group_correlations(std::span<const CrossGroupRow> rows) {
  std::vector<double> response;
  std::array<std::vector<double>, 5> covariates;
  for (const auto& r : rows) {
    const auto y = r.response();
    if (!y) continue;
    response.push_back(*y);
    covariates[0].push_back(r.majority_followers);
    covariates[1].push_back(r.majority_following);
    for (std::size_t k = 0; k < kNumTopics; ++k) covariates[2 + k].push_back(r.z[k]);
  }
  static const std::array<std::string, 5> kNames{"majority_followers", "majority_following", "z_professional",
                                                 "z_mainstream", "z_marginal"};
  std::vector<NamedCorrelation> out;
  for (std::size_t c = 0; c < covariates.size(); ++c) {
    NamedCorrelation nc{kNames[c], std::nullopt};
    try {
      nc.result = pearson(covariates[c], response);
    } catch (const UndefinedStatistic&) {
    }
    out.push_back(std::move(nc));
  }
  return out;
}

std::vector<RecsVsInDegreeRow> recs_vs_incoming_edges(const EventLog& log, const Population& population,
                                                      const DirectedGraph& graph, Step burn_in) {
  const std::size_t n = population.size();
  std::vector<std::array<double, kNumTopics>> items(n, {0.0, 0.0, 0.0});
  std::vector<std::array<double, kNumTopics>> recs(n, {0.0, 0.0, 0.0});
  for (const auto& c : log.content) {
    if (c.created_at >= burn_in) items[c.creator][index(c.topic)] += 1.0;
  }
  for (const auto& r : log.recs) {
    if (r.step < burn_in) continue;
    const ContentItem& item = log.item(r.content);
    recs[item.creator][index(item.topic)] += 1.0;
  }
  std::vector<RecsVsInDegreeRow> rows;
  for (Topic topic : kTopics) {
    for (UserId u = 0; u < n; ++u) {
      const std::size_t k = index(topic);
      if (items[u][k] <= 0.0) continue;
      rows.push_back(RecsVsInDegreeRow{u, population.group(u), topic,
                                       static_cast<double>(graph.in_neighbors(u).size()),
                                       recs[u][k] / items[u][k]});
    }
  }
  return rows;
}

std::vector<RecsVsInDegreeFit> fit_recs_vs_incoming_edges(std::span<const RecsVsInDegreeRow> rows) {
  std::vector<RecsVsInDegreeFit> fits;
  for (Topic topic : kTopics) {
    for (Group group : kGroups) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& r : rows) {
        if (r.topic == topic && r.group == group) {
          x.push_back(r.in_degree);
          y.push_back(r.recs_per_item);
        }
      }
      fits.push_back(RecsVsInDegreeFit{topic, group, least_squares(x, y)});
    }
  }
  return fits;
}

RunMetrics compute_run_metrics(const EventLog& log, const Population& population, const DirectedGraph& graph,
                               double alpha, const MetricsConfig& config) {
  config.validate(log.steps);
  RunMetrics m;
  m.ratio = professional_rec_ratio(log, population, config, RatioNormalization::PerCapita);
  m.ratio_per_item = professional_rec_ratio(log, population, config, RatioNormalization::PerItem);
  m.gap = interaction_gap(log, population, graph, alpha, config);
  for (ReceiverFilter f : {ReceiverFilter::All, ReceiverFilter::Minority, ReceiverFilter::Majority}) {
    for (const auto& s : minority_share_by_topic(log, population, f, config.burn_in)) m.topic_shares.push_back(s);
  }
  m.per_user = per_user_cross_group_visibility(log, population, graph, config.burn_in);
  m.cross_group_share = cross_group_professional_share(m.per_user);
  m.correlations = cross_group_correlations(m.per_user);
  m.recs_vs_in = recs_vs_incoming_edges(log, population, graph, config.burn_in);
  m.recs_vs_in_fits = fit_recs_vs_incoming_edges(m.recs_vs_in);
  m.composition = follower_composition(graph, population);
  return m;
}

void write_series_csv(std::ostream& out, const TimeSeries& series, std::string_view value_name) {
  out << "t," << value_name << '\n';
  csv::Writer w(out);
  for (std::size_t i = 0; i < series.size(); ++i) {
    w.field(series.t[i]).field(series.v[i]);
    w.end_row();
  }
}

TimeSeries read_series_csv(std::istream& in, std::string* value_name) {
  std::string line;
  if (!csv::next_row(in, line)) throw IoError("empty series file");
  const auto header = csv::split(line);
  if (header.size() != 2 || header[0] != "t") throw IoError("series header must be 't,<name>'");
  if (value_name) *value_name = std::string(header[1]);
  TimeSeries s;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 2) throw IoError("series row '" + line + "' must have two fields");
    s.push(static_cast<Step>(csv::parse_uint(f[0])), csv::parse_optional_double(f[1]));
  }
  return s;
}

void write_topic_shares_csv(std::ostream& out, std::span<const TopicShare> shares) {
  out << "topic,receiver,share_minority_created,creation_share_minority\n";
  csv::Writer w(out);
  for (const auto& s : shares) {
    w.field(to_string(s.topic)).field(to_string(s.receiver)).field(s.rec_share_minority).field(s.creation_share_minority);
    w.end_row();
  }
}

void write_per_user_csv(std::ostream& out, std::span<const CrossGroupRow> rows) {
  out << "user_id,prof_recs_to_majority,prof_recs_total,prof_items,prof_recs_to_majority_per_item,"
         "majority_followers,majority_following,z_professional,z_mainstream,z_marginal\n";
  csv::Writer w(out);
  for (const auto& r : rows) {
    w.field(r.user).field(r.professional_recs_to_majority).field(r.professional_recs_total);
    w.field(r.professional_items).field(r.response());
    w.field(r.majority_followers).field(r.majority_following);
    for (double z : r.z) w.field(z);
    w.end_row();
  }
}

void write_correlations_csv(std::ostream& out, std::span<const NamedCorrelation> rows) {
  out << "covariate,rho,p_value,n\n";
  csv::Writer w(out);
  for (const auto& r : rows) {
    w.field(r.covariate);
    if (r.result) {
      w.field(r.result->rho).field(r.result->p_value).field(static_cast<std::uint64_t>(r.result->n));
    } else {
      w.field(csv::kUndefined).field(csv::kUndefined).field(csv::kUndefined);
    }
    w.end_row();
  }
}

void write_recs_vs_in_csv(std::ostream& out, std::span<const RecsVsInDegreeRow> rows) {
  out << "user_id,group,topic,in_degree,recs_per_item\n";
  csv::Writer w(out);
  for (const auto& r : rows) {
    w.field(r.user).field(to_string(r.group)).field(to_string(r.topic)).field(r.in_degree).field(r.recs_per_item);
    w.end_row();
  }
}

void write_recs_vs_in_fits_csv(std::ostream& out, std::span<const RecsVsInDegreeFit> fits) {
  out << "topic,group,slope,intercept,n\n";
  csv::Writer w(out);
  for (const auto& f : fits) {
    w.field(to_string(f.topic)).field(to_string(f.group));
    if (f.fit) {
      w.field(f.fit->slope).field(f.fit->intercept).field(static_cast<std::uint64_t>(f.fit->n));
    } else {
      w.field(csv::kUndefined).field(csv::kUndefined).field(csv::kUndefined);
    }
    w.end_row();
  }
}

}  // namespace feedloop
