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
#include <vector>

#include "feedloop/rng.hpp"
#include "feedloop/types.hpp"

namespace feedloop {

/// Floor applied to raw preferences before they are used as probabilities.
inline constexpr double kPreferenceFloor = 1e-6;

struct GroupPreferencePrior {
  TopicVector mu;
  double sigma = 0.1;
};

struct PopulationConfig {
  std::size_t n = 1000;
  double minority_share = 0.2;
  GroupPreferencePrior majority{{0.5, 0.4, 0.1}, 0.1};
  GroupPreferencePrior minority{{0.5, 0.1, 0.4}, 0.1};

  /// floor(n * minority_share)
  std::size_t minority_count() const;
  const GroupPreferencePrior& prior(Group g) const {
    return g == Group::Minority ? minority : majority;
  }
  /// Throws ConfigError.
  void validate() const;
};

struct UserProfile {
  UserId id = 0;
  Group group = Group::Majority;
  TopicVector z{};  // raw draws; may be negative
};

/// Clamp entries below at kPreferenceFloor, then scale to sum 1.
TopicVector normalized_preferences(const TopicVector& z);

/// Immutable user set. Ids are 0..n-1, minority users first.
class Population {
 public:
  Population() = default;
  explicit Population(std::vector<UserProfile> users);

  std::size_t size() const { return users_.size(); }
  const std::vector<UserProfile>& users() const { return users_; }
  const UserProfile& user(UserId id) const { return users_[id]; }
  Group group(UserId id) const { return users_[id].group; }
  const TopicVector& z(UserId id) const { return users_[id].z; }
  /// Cached normalized_preferences(z(id)).
  const TopicVector& preference_distribution(UserId id) const { return normalized_[id]; }
  std::size_t count(Group g) const { return counts_[index(g)]; }

  friend bool operator==(const Population& a, const Population& b);

 private:
  std::vector<UserProfile> users_;
  std::vector<TopicVector> normalized_;
  std::array<std::size_t, 2> counts_{0, 0};
};

Population sample_population(const PopulationConfig& config, Rng& rng);

/// Header `user_id,group,z_professional,z_mainstream,z_marginal`.
void write_population_csv(std::ostream& out, const Population& population);
/// Throws IoError on malformed input.
Population read_population_csv(std::istream& in);

}  // namespace feedloop
