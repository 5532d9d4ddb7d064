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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "feedloop/errors.hpp"
#include "feedloop/netgen.hpp"
#include "feedloop/policy.hpp"
#include "feedloop/population.hpp"
#include "feedloop/rng.hpp"

namespace feedloop {

struct EngineConfig {
  double p_create = 0.2;
  double p_request = 0.8;
  Step steps = 10000;
  PolicyKind policy = PolicyKind::RealGraph;
  TieStrengthParams tie{};
  EmaParams ema{};
  StatsMode stats_mode = StatsMode::Incremental;
  StandardizationScope standardization = StandardizationScope::AllPairs;
  /// Record an O(E) tie summary every k steps; 0 disables.
  Step tie_summary_every = 0;

  void validate() const;
};

struct ContentItem {
  ContentId id;
  UserId creator;
  Topic topic;
  Step created_at;
};

struct RecommendationEvent {
  Step step;
  UserId viewer;
  ContentId content;
  bool interacted;
};

/// Everything a run produced. Content ids equal their index in `content`.
struct EventLog {
  std::vector<ContentItem> content;
  std::vector<RecommendationEvent> recs;
  std::vector<TieSummaryRow> tie_summary;
  std::uint64_t requests = 0;
  Step steps = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> meta;

  /// Throws IntegrityError for an unknown id.
  const ContentItem& item(ContentId id) const {
    if (id >= content.size()) throw IntegrityError("unknown content id " + std::to_string(id));
    return content[id];
  }
};

/// Index drawn with probability weights[i] / sum(weights). Throws
/// IntegrityError for negative, non-finite or all-zero weights.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

/// One run of the create / recommend / interact / update loop.
///
/// Each phase draws from its own random stream and visits users in ascending
/// id, so the content a run creates does not depend on the policy.
class Simulation {
 public:
  Simulation(const Population& population, const DirectedGraph& graph, const EngineConfig& config,
             std::uint64_t seed);

  /// Runs step current_step(). Returns the number of recommendation events
  /// it appended.
  std::size_t step();
  void run();

  Step current_step() const { return t_; }
  const EventLog& log() const { return log_; }
  EventLog take_log() { return std::move(log_); }
  const TieModel& ties() const { return ties_; }

  /// Called after every update phase with the step just completed.
  void set_step_observer(std::function<void(Step, const TieModel&)> fn) { observer_ = std::move(fn); }

 private:
  const Population& population_;
  const DirectedGraph& graph_;
  EngineConfig config_;
  TieModel ties_;
  Rng creation_;
  Rng request_;
  Rng sampling_;
  Rng interaction_;
  Step t_ = 0;
  EventLog log_;
  std::function<void(Step, const TieModel&)> observer_;

  // Per-step scratch.
  std::vector<char> requesting_;
  std::vector<std::vector<Candidate>> inbox_;
  std::vector<double> scores_;
  std::vector<EdgeUpdate> updates_;
};

EventLog run_simulation(const Population& population, const DirectedGraph& graph,
                        const EngineConfig& config, std::uint64_t seed);

}  // namespace feedloop
