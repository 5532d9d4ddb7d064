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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "feedloop/errors.hpp"
#include "feedloop/population.hpp"
#include "feedloop/rng.hpp"

using namespace feedloop;

TEST_CASE("normalized_preferences") {
  SUBCASE("already normalized input is returned unchanged") {
    const auto p = normalized_preferences({0.5, 0.4, 0.1});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("proportional scaling") {
    const auto p = normalized_preferences({1.0, 1.0, 2.0});
    CHECK(p[0] == 0.25);
    CHECK(p[1] == 0.25);
    CHECK(p[2] == 0.5);
  }
  SUBCASE("negative entries are clamped to the floor first") {
    const auto p = normalized_preferences({-0.2, 0.3, 0.9});
    const double total = kPreferenceFloor + 1.2;
    CHECK(p[0] == doctest::Approx(kPreferenceFloor / total).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(8.3333e-7).epsilon(1e-4));
    CHECK(p[1] == doctest::Approx(0.3 / total).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.9 / total).epsilon(1e-12));
  }
  SUBCASE("all-negative input degenerates to uniform") {
    const auto p = normalized_preferences({-1.0, -2.0, -3.0});
    for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("normalized_preferences is a probability vector, idempotent above the floor") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const TopicVector z{rng.normal(0.3, 0.5), rng.normal(0.3, 0.5), rng.normal(0.3, 0.5)};
    const auto p = normalized_preferences(z);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < 3; ++k) CHECK(p[k] >= kPreferenceFloor / (1.0 + 3 * kPreferenceFloor + 3.0 * 2.5));
    if (*std::min_element(p.begin(), p.end()) < kPreferenceFloor) continue;
    const auto q = normalized_preferences(p);
    for (std::size_t k = 0; k < 3; ++k) CHECK(q[k] == doctest::Approx(p[k]).epsilon(1e-14));
  }
}

TEST_CASE("sample_population assigns groups by id prefix") {
  PopulationConfig cfg;
  Rng rng = make_stream(1, Stream::Population);
  const Population pop = sample_population(cfg, rng);
  REQUIRE(pop.size() == 1000);
  CHECK(pop.count(Group::Minority) == 200);
  CHECK(pop.count(Group::Majority) == 800);
  for (UserId i = 0; i < pop.size(); ++i) {
    CHECK(pop.user(i).id == i);
    CHECK(pop.group(i) == (i < 200 ? Group::Minority : Group::Majority));
  }
}

TEST_CASE("group counts are exact for any share") {
  for (std::size_t n : {2u, 7u, 10u, 333u, 1000u}) {
    for (double share : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
      PopulationConfig cfg;
      cfg.n = n;
      cfg.minority_share = share;
      const auto expected = static_cast<std::size_t>(std::floor(static_cast<double>(n) * share));
      if (expected < 1) {
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        continue;
      }
      Rng rng(5);
      const Population pop = sample_population(cfg, rng);
      CHECK(pop.count(Group::Minority) == expected);
      CHECK(pop.count(Group::Majority) == n - expected);
    }
  }
}

TEST_CASE("minority mainstream preference mean is near the prior") {
  PopulationConfig cfg;
  Rng rng = make_stream(3, Stream::Population);
  const Population pop = sample_population(cfg, rng);
  double sum = 0.0;
  for (const auto& u : pop.users()) {
    if (u.group == Group::Minority) sum += u.z[1];
  }
  CHECK(std::abs(sum / 200.0 - 0.1) < 0.02);
}

TEST_CASE("sample means converge to the prior means at n = 10000") {
  PopulationConfig cfg;
  cfg.n = 10000;
  Rng rng = make_stream(17, Stream::Population);
  const Population pop = sample_population(cfg, rng);
  for (Group g : kGroups) {
    TopicVector mean{0.0, 0.0, 0.0};
    for (const auto& u : pop.users()) {
      if (u.group != g) continue;
      for (std::size_t k = 0; k < 3; ++k) mean[k] += u.z[k];
    }
    const double size = static_cast<double>(pop.count(g));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(mean[k] / size - cfg.prior(g).mu[k]) < 4.0 * cfg.prior(g).sigma / std::sqrt(size));
    }
  }
}

TEST_CASE("a vanishing sigma reproduces the prior mean") {
  PopulationConfig cfg;
  cfg.n = 50;
  cfg.minority.sigma = 1e-9;
  cfg.majority.sigma = 1e-9;
  Rng rng(42);
  const Population pop = sample_population(cfg, rng);
  for (const auto& u : pop.users()) {
    const auto& mu = cfg.prior(u.group).mu;
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(u.z[k] - mu[k]) < 1e-6);
  }
}

TEST_CASE("same seed gives the same population; different seeds differ") {
  PopulationConfig cfg;
  Rng a(42);
  Rng b(42);
  Rng c(43);
  const Population pa = sample_population(cfg, a);
  const Population pb = sample_population(cfg, b);
  const Population pc = sample_population(cfg, c);
  CHECK(pa == pb);
  CHECK_FALSE(pa == pc);
}

TEST_CASE("population config validation") {
  PopulationConfig cfg;
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.minority_share = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.minority_share = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.minority.sigma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.majority.mu[0] = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("population CSV round trip") {
  PopulationConfig cfg;
  cfg.n = 40;
  Rng rng(8);
  const Population pop = sample_population(cfg, rng);
  std::stringstream buf;
  write_population_csv(buf, pop);
  CHECK(buf.str().rfind("user_id,group,z_professional,z_mainstream,z_marginal\n", 0) == 0);
  const Population back = read_population_csv(buf);
  CHECK(back == pop);
}

TEST_CASE("population CSV reader rejects malformed input") {
  std::stringstream bad_header("id,group\n");
  CHECK_THROWS_AS(read_population_csv(bad_header), IoError);
  std::stringstream bad_group("user_id,group,z_professional,z_mainstream,z_marginal\n0,other,0.1,0.2,0.3\n");
  CHECK_THROWS_AS(read_population_csv(bad_group), IoError);
  std::stringstream bad_id("user_id,group,z_professional,z_mainstream,z_marginal\n1,majority,0.1,0.2,0.3\n");
  CHECK_THROWS_AS(read_population_csv(bad_id), IoError);
}

TEST_CASE("Rng streams are reproducible and distinct") {
  Rng a = make_stream(7, Stream::Creation);
  Rng b = make_stream(7, Stream::Creation);
  Rng c = make_stream(7, Stream::Request);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  Rng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
