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

#include "feedloop/population.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

std::optional<Group> parse_group(std::string_view s) {
  if (s == "majority") return Group::Majority;
  if (s == "minority") return Group::Minority;
  return std::nullopt;
}

std::optional<Topic> parse_topic(std::string_view s) {
  for (Topic t : kTopics) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

std::size_t PopulationConfig::minority_count() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * minority_share));
}

void PopulationConfig::validate() const {
  if (n < 2) throw ConfigError("population.n must be at least 2 (got " + std::to_string(n) + ")");
  if (!(minority_share >= 0.0 && minority_share < 1.0)) {
    throw ConfigError("population.minority_share must lie in [0, 1)");
  }
  const std::size_t minority = minority_count();
  if (minority < 1) throw ConfigError("population.minority_share leaves the minority group empty");
  if (n - minority < minority) {
    throw ConfigError("population.minority_share makes the minority larger than the majority");
  }
  for (Group g : kGroups) {
    const auto& p = prior(g);
    const std::string name = "population." + std::string(to_string(g)) + "_prior";
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw ConfigError(name + ".sigma must be > 0");
    for (double m : p.mu) {
      if (!std::isfinite(m)) throw ConfigError(name + ".mu must be finite");
    }
  }
}

TopicVector normalized_preferences(const TopicVector& z) {
  TopicVector out{};
  double total = 0.0;
  for (std::size_t k = 0; k < kNumTopics; ++k) {
    out[k] = z[k] < kPreferenceFloor ? kPreferenceFloor : z[k];
    total += out[k];
  }
  for (double& v : out) v /= total;
  return out;
}

Population::Population(std::vector<UserProfile> users) : users_(std::move(users)) {
  normalized_.reserve(users_.size());
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (users_[i].id != i) throw IntegrityError("population ids must be 0..n-1 in order");
    for (double v : users_[i].z) {
      if (!std::isfinite(v)) throw IntegrityError("non-finite preference for user " + std::to_string(i));
    }
    normalized_.push_back(normalized_preferences(users_[i].z));
    ++counts_[index(users_[i].group)];
  }
}

bool operator==(const Population& a, const Population& b) {
  if (a.users_.size() != b.users_.size()) return false;
  for (std::size_t i = 0; i < a.users_.size(); ++i) {
    const auto& x = a.users_[i];
    const auto& y = b.users_[i];
    if (x.id != y.id || x.group != y.group || x.z != y.z) return false;
  }
  return true;
}

Population sample_population(const PopulationConfig& config, Rng& rng) {
  config.validate();
  const std::size_t minority = config.minority_count();
  std::vector<UserProfile> users(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    auto& u = users[i];
    u.id = static_cast<UserId>(i);
    u.group = i < minority ? Group::Minority : Group::Majority;
    const auto& prior = config.prior(u.group);
    for (std::size_t k = 0; k < kNumTopics; ++k) u.z[k] = rng.normal(prior.mu[k], prior.sigma);
  }
  return Population(std::move(users));
}

namespace {
constexpr std::string_view kPopulationHeader =
    "user_id,group,z_professional,z_mainstream,z_marginal";
}

void write_population_csv(std::ostream& out, const Population& population) {
  out << kPopulationHeader << '\n';
  csv::Writer w(out);
  for (const auto& u : population.users()) {
    w.field(u.id).field(to_string(u.group));
    for (double v : u.z) w.field(v);
    w.end_row();
  }
}

Population read_population_csv(std::istream& in) {
  csv::expect_header(in, kPopulationHeader);
  std::vector<UserProfile> users;
  std::string line;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 5) throw IoError("population row has " + std::to_string(f.size()) + " fields");
    UserProfile u;
    u.id = static_cast<UserId>(csv::parse_uint(f[0]));
    const auto g = parse_group(f[1]);
    if (!g) throw IoError("unknown group '" + std::string(f[1]) + "'");
    u.group = *g;
    for (std::size_t k = 0; k < kNumTopics; ++k) u.z[k] = csv::parse_double(f[2 + k]);
    users.push_back(u);
  }
  try {
    return Population(std::move(users));
  } catch (const IntegrityError& e) {
    throw IoError(std::string("invalid population file: ") + e.what());
  }
}

}  // namespace feedloop
