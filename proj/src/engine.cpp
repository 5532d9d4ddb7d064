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

#include "feedloop/engine.hpp"

#include <cmath>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

void EngineConfig::validate() const {
  if (!(p_create >= 0.0 && p_create <= 1.0)) throw ConfigError("engine.p_create must lie in [0, 1]");
  if (!(p_request >= 0.0 && p_request <= 1.0)) throw ConfigError("engine.p_request must lie in [0, 1]");
  for (double b : tie.beta) {
    if (!std::isfinite(b)) throw ConfigError("policy.beta entries must be finite");
  }
  ema.validate();
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw IntegrityError("categorical weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw IntegrityError("categorical weights sum to zero");
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // u landed in the rounding slack above the final partial sum.
  return last_positive;
}

namespace {

const EngineConfig& checked(const EngineConfig& config, const Population& population,
                            const DirectedGraph& graph) {
  config.validate();
  if (graph.node_count() != population.size()) {
    throw ConfigError("graph has " + std::to_string(graph.node_count()) + " nodes but population has " +
                      std::to_string(population.size()) + " users");
  }
  return config;
}

}  // namespace

Simulation::Simulation(const Population& population, const DirectedGraph& graph,
                       const EngineConfig& config, std::uint64_t seed)
    : population_(population),
      graph_(graph),
      config_(checked(config, population, graph)),
      ties_(graph, population, config.tie, config.ema, config.stats_mode, config.standardization),
      creation_(make_stream(seed, Stream::Creation)),
      request_(make_stream(seed, Stream::Request)),
      sampling_(make_stream(seed, Stream::Sampling)),
      interaction_(make_stream(seed, Stream::Interaction)),
      requesting_(population.size(), 0),
      inbox_(population.size()) {
  log_.steps = config.steps;
  log_.seed = seed;
  log_.meta["seed"] = std::to_string(seed);
  log_.meta["steps"] = std::to_string(config.steps);
  log_.meta["policy"] = std::string(to_string(config.policy));
  log_.meta["alpha"] = csv::format(config.ema.alpha);
  log_.meta["p_create"] = csv::format(config.p_create);
  log_.meta["p_request"] = csv::format(config.p_request);
}

std::size_t Simulation::step() {
  if (t_ >= config_.steps) throw IntegrityError("simulation already ran all steps");
  const Step t = t_;
  const std::size_t n = population_.size();

  // Creation.
  const std::size_t first_new = log_.content.size();
  for (UserId u = 0; u < n; ++u) {
    if (!creation_.bernoulli(config_.p_create)) continue;
    const auto& prefs = population_.preference_distribution(u);
    const Topic topic = kTopics[sample_categorical(prefs, creation_)];
    log_.content.push_back(ContentItem{static_cast<ContentId>(log_.content.size()), u, topic, t});
  }

  // Requests and candidate assembly: only content created this step is eligible.
  for (UserId u = 0; u < n; ++u) {
    requesting_[u] = request_.bernoulli(config_.p_request) ? 1 : 0;
    log_.requests += requesting_[u];
  }
  for (std::size_t c = first_new; c < log_.content.size(); ++c) {
    const ContentItem& item = log_.content[c];
    const auto followers = graph_.in_neighbors(item.creator);
    const auto edges = graph_.in_edge_ids(item.creator);
    for (std::size_t k = 0; k < followers.size(); ++k) {
      if (requesting_[followers[k]]) {
        inbox_[followers[k]].push_back(Candidate{item.id, item.creator, item.topic, edges[k]});
      }
    }
  }

  // Recommendation.
  const std::size_t first_rec = log_.recs.size();
  updates_.clear();
  const ScoringContext ctx{population_, graph_, &ties_};
  for (UserId viewer = 0; viewer < n; ++viewer) {
    auto& inbox = inbox_[viewer];
    if (inbox.empty()) continue;
    score_candidates(config_.policy, viewer, inbox, ctx, scores_);
    const Candidate& chosen = inbox[sample_categorical(scores_, sampling_)];
    log_.recs.push_back(RecommendationEvent{t, viewer, chosen.content, false});
    updates_.push_back(EdgeUpdate{chosen.edge, false});
    inbox.clear();
  }

  // Interaction.
  for (std::size_t r = first_rec; r < log_.recs.size(); ++r) {
    auto& rec = log_.recs[r];
    const Topic topic = log_.content[rec.content].topic;
    rec.interacted = interaction_.bernoulli(population_.preference_distribution(rec.viewer)[index(topic)]);
    updates_[r - first_rec].interacted = rec.interacted;
  }

  // Update, after all of the step's interactions.
  ties_.apply_step(updates_);
  if (config_.tie_summary_every > 0 && t % config_.tie_summary_every == 0) {
    for (const auto& row : summarize_ties(t, ties_, graph_, population_)) log_.tie_summary.push_back(row);
  }
  if (observer_) observer_(t, ties_);
  ++t_;
  return log_.recs.size() - first_rec;
}

void Simulation::run() {
  while (t_ < config_.steps) step();
}

EventLog run_simulation(const Population& population, const DirectedGraph& graph,
                        const EngineConfig& config, std::uint64_t seed) {
  Simulation sim(population, graph, config, seed);
  sim.run();
  return sim.take_log();
}

}  // namespace feedloop
