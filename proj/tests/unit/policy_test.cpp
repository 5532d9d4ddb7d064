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

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <sstream>

#include "feedloop/errors.hpp"
#include "feedloop/policy.hpp"
#include "helpers.hpp"

using namespace feedloop;
using feedloop::testing::make_population;
using feedloop::testing::uniform_population;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

double big_logistic(double x) {
  const Big one(1);
  return static_cast<double>(one / (one + boost::multiprecision::exp(-Big(x))));
}

Population random_population(std::size_t n, std::size_t minority, std::uint64_t seed) {
  PopulationConfig cfg;
  cfg.n = n;
  cfg.minority_share = static_cast<double>(minority) / static_cast<double>(n);
  Rng rng(seed);
  return sample_population(cfg, rng);
}

}  // namespace

TEST_CASE("logistic matches a 50-digit evaluation") {
  for (double x : {-30.0, -10.0, -2.5, -1.0, -1e-8, 0.0, 1e-8, 0.3, 1.0, 2.5, 10.0, 30.0}) {
    CAPTURE(x);
    CHECK(std::abs(logistic(x) - big_logistic(x)) <= 1e-12);
  }
  CHECK(logistic(0.0) == 0.5);
}

TEST_CASE("tie strength examples") {
  const TieStrengthParams p;  // (1, 1, -1, 5)
  CHECK(tie_strength({0, 0, 0, 0}, p) == 0.5);
  CHECK(tie_strength({0, 0, 0, 0}, TieStrengthParams{{3, -2, 7, 0.1}}) == 0.5);
  const double up = tie_strength({1, 0, 0, 0}, p);
  const double down = tie_strength({0, 0, 1, 0}, p);
  CHECK(std::abs(up - 0.731058578630004879) <= 1e-12);
  CHECK(std::abs(down - 0.268941421369995121) <= 1e-12);
  CHECK(std::abs(up - big_logistic(1.0)) <= 1e-12);
  CHECK(std::abs((up - 0.5) - (0.5 - down)) <= 1e-15);
}

TEST_CASE("tie strength against the 50-digit oracle on random inputs") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const FeatureVector f{rng.normal(0, 2), rng.normal(0, 2), rng.normal(0, 2), rng.normal(0, 2)};
    const TieStrengthParams p{{rng.normal(0, 3), rng.normal(0, 3), rng.normal(0, 3), rng.normal(0, 3)}};
    Big logit(0);
    for (std::size_t k = 0; k < 4; ++k) logit += Big(p.beta[k]) * Big(f[k]);
    const double expected = static_cast<double>(Big(1) / (Big(1) + boost::multiprecision::exp(-logit)));
    CHECK(std::abs(tie_strength(f, p) - expected) <= 1e-12);
  }
}

TEST_CASE("tie strength is monotone in each feature according to the sign of beta") {
  Rng rng(5);
  const TieStrengthParams p{{0.7, 1.3, -0.9, 2.0}};
  for (int i = 0; i < 200; ++i) {
    FeatureVector f{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    const double base = tie_strength(f, p);
    for (std::size_t k = 0; k < 4; ++k) {
      FeatureVector g = f;
      g[k] += 0.25;
      if (p.beta[k] > 0) {
        CHECK(tie_strength(g, p) > base);
      } else {
        CHECK(tie_strength(g, p) < base);
      }
    }
  }
}

TEST_CASE("static features on the three-node graph") {
  // Edges 0->1, 0->2, 1->2.
  const DirectedGraph g(3, {{0, 2}, {1, 2}, {0, 1}});
  const auto pop = make_population({Group::Majority, Group::Majority, Group::Minority},
                                   {{0, 0, 0}, {3, 4, 0}, {3, 4, 0}});
  const EdgeState s = compute_static_features(g, pop);
  REQUIRE(s.edge_count() == 3);
  const EdgeId e01 = *g.find_edge(0, 1);
  const EdgeId e02 = *g.find_edge(0, 2);
  const EdgeId e12 = *g.find_edge(1, 2);
  CHECK(s.out_edge[e01] == 1.0);  // out(0)={1,2}, out(1)={2}
  CHECK(s.in_edge[e01] == 0.0);   // in(0)={}, in(1)={0}
  CHECK(s.out_edge[e02] == 0.0);  // out(2)={}
  CHECK(s.in_edge[e02] == 0.0);   // in(2)={0,1}
  CHECK(s.out_edge[e12] == 0.0);
  CHECK(s.in_edge[e12] == 1.0);   // in(1)={0}, in(2)={0,1}
  CHECK(s.dist[e01] == 5.0);
  CHECK(s.dist[e12] == 0.0);
  for (double v : s.int_count) CHECK(v == 0.0);
}

TEST_CASE("static features match a sorted-merge reference on a random graph") {
  const auto pop = random_population(150, 30, 3);
  Rng rng(9);
  const auto g = sbm_graph(pop, SbmParams{0.3, 0.4, 0.05, 0.05}, rng);
  const EdgeState s = compute_static_features(g, pop);
  auto common = [](std::span<const UserId> a, std::span<const UserId> b) {
    std::vector<UserId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return static_cast<double>(out.size());
  };
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const UserId i = g.edge_source(e);
    const UserId j = g.edge_target(e);
    CHECK(s.out_edge[e] == common(g.out_neighbors(i), g.out_neighbors(j)));
    CHECK(s.in_edge[e] == common(g.in_neighbors(i), g.in_neighbors(j)));
    double d2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) d2 += (pop.z(i)[k] - pop.z(j)[k]) * (pop.z(i)[k] - pop.z(j)[k]);
    CHECK(s.dist[e] == doctest::Approx(std::sqrt(d2)).epsilon(1e-14));
  }
}

TEST_CASE("EMA update examples") {
  EdgeState s;
  s.int_count = {0.0, 0.5, 0.37};
  s.out_edge = s.in_edge = s.dist = {0.0, 0.0, 0.0};
  const EmaParams ema{0.01};
  const std::vector<EdgeUpdate> ups{{0, true}, {1, false}};
  update_interaction_counts(s, ups, ema);
  CHECK(s.int_count[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(s.int_count[1] == doctest::Approx(0.495).epsilon(1e-15));
  CHECK(s.int_count[2] == 0.37);
  const std::vector<EdgeUpdate> bad{{3, true}};
  CHECK_THROWS_AS(update_interaction_counts(s, bad, ema), IntegrityError);
  CHECK_THROWS_AS(EmaParams{0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(EmaParams{1.0}.validate(), ConfigError);
}

TEST_CASE("EMA chains match the direct recurrence and stay in [0, 1]") {
  Rng rng(77);
  for (double alpha : {0.01, 0.1, 0.5, 0.9}) {
    EdgeState s;
    s.int_count.assign(8, 0.0);
    s.out_edge = s.in_edge = s.dist = std::vector<double>(8, 0.0);
    std::vector<long double> ref(8, 0.0L);
    for (int t = 0; t < 2000; ++t) {
      std::vector<EdgeUpdate> ups;
      for (EdgeId e = 0; e < 8; ++e) {
        if (rng.bernoulli(0.6)) ups.push_back({e, rng.bernoulli(0.4)});
      }
      update_interaction_counts(s, ups, EmaParams{alpha});
      for (const auto& u : ups) {
        ref[u.edge] = static_cast<long double>(alpha) * (u.interacted ? 1.0L : 0.0L) +
                      (1.0L - static_cast<long double>(alpha)) * ref[u.edge];
      }
      for (EdgeId e = 0; e < 8; ++e) {
        CHECK(s.int_count[e] >= 0.0);
        CHECK(s.int_count[e] <= 1.0);
      }
    }
    for (EdgeId e = 0; e < 8; ++e) CHECK(std::abs(s.int_count[e] - static_cast<double>(ref[e])) <= 1e-12);
  }
}

TEST_CASE("standardize examples") {
  const auto st = column_stats(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(st.mean == 2.0);
  CHECK(st.stddev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(st.standardize(1.0) == doctest::Approx(-1.224744871391589).epsilon(1e-14));
  CHECK(st.standardize(2.0) == 0.0);
  CHECK(st.standardize(3.0) == doctest::Approx(1.224744871391589).epsilon(1e-14));
  const auto flat = column_stats(std::vector<double>{4.0, 4.0, 4.0});
  CHECK(flat.stddev == 0.0);
  CHECK(flat.standardize(4.0) == 0.0);
  CHECK(flat.standardize(9.0) == 0.0);
  CHECK_THROWS_AS(column_stats(std::vector<double>{}), ConfigError);
}

TEST_CASE("standardized columns have mean 0 and population std 1") {
  const auto pop = random_population(200, 40, 11);
  Rng rng(11);
  const auto g = sbm_graph(pop, SbmParams{}, rng);
  EdgeState s = compute_static_features(g, pop);
  for (auto& v : s.int_count) v = rng.uniform();
  const auto z = standardize(s);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const auto& col = z.columns[f];
    long double sum = 0.0L;
    for (double v : col) sum += v;
    const long double mean = sum / col.size();
    long double ss = 0.0L;
    for (double v : col) ss += (v - mean) * (v - mean);
    CHECK(std::abs(static_cast<double>(mean)) <= 1e-12);
    CHECK(std::abs(static_cast<double>(std::sqrt(ss / col.size())) - 1.0) <= 1e-12);
  }
}

TEST_CASE("adding a constant to a raw column leaves standardized values unchanged") {
  const auto pop = random_population(120, 24, 21);
  Rng rng(21);
  const auto g = sbm_graph(pop, SbmParams{}, rng);
  EdgeState s = compute_static_features(g, pop);
  for (auto& v : s.int_count) v = rng.uniform();
  const auto a = standardize(s);
  for (auto& v : s.out_edge) v += 17.0;
  for (auto& v : s.dist) v += 0.125;
  const auto b = standardize(s);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    for (std::size_t e = 0; e < s.edge_count(); ++e) {
      CHECK(std::abs(a.columns[f][e] - b.columns[f][e]) <= 1e-12);
    }
  }
}

TEST_CASE("TieModel agrees with the free functions") {
  const auto pop = random_population(100, 20, 31);
  Rng rng(31);
  const auto g = sbm_graph(pop, SbmParams{}, rng);
  TieModel model(g, pop, TieStrengthParams{}, EmaParams{0.05}, StatsMode::FullRecompute,
                 StandardizationScope::FollowEdges);
  std::vector<EdgeUpdate> ups;
  for (EdgeId e = 0; e < g.edge_count(); e += 3) ups.push_back({e, (e % 2) == 0});
  model.apply_step(ups);
  const auto z = standardize(model.state());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto f = model.standardized_features(e);
    for (std::size_t k = 0; k < kNumFeatures; ++k) CHECK(std::abs(f[k] - z.columns[k][e]) <= 1e-12);
    CHECK(model.tie_strength(e) == tie_strength(f, model.params()));
  }
}

TEST_CASE("all-pairs scope matches an explicit n x n oracle") {
  const auto pop = random_population(40, 8, 33);
  Rng rng(33);
  const auto g = sbm_graph(pop, SbmParams{}, rng);
  TieModel model(g, pop, TieStrengthParams{}, EmaParams{0.05}, StatsMode::FullRecompute);
  CHECK(model.scope() == StandardizationScope::AllPairs);
  CHECK(model.cell_count() == 40 * 39);
  std::vector<EdgeUpdate> ups;
  for (EdgeId e = 0; e < g.edge_count(); e += 2) ups.push_back({e, (e % 3) == 0});
  model.apply_step(ups);
  model.apply_step(ups);

  // Dense matrices over ordered pairs i != j, built from set intersections.
  std::array<std::vector<long double>, kNumFeatures> cells;
  for (UserId i = 0; i < 40; ++i) {
    for (UserId j = 0; j < 40; ++j) {
      if (i == j) continue;
      const auto oi = g.out_neighbors(i);
      const auto oj = g.out_neighbors(j);
      const auto ii = g.in_neighbors(i);
      const auto ij = g.in_neighbors(j);
      std::vector<UserId> common;
      std::set_intersection(oi.begin(), oi.end(), oj.begin(), oj.end(), std::back_inserter(common));
      cells[0].push_back(common.size());
      common.clear();
      std::set_intersection(ii.begin(), ii.end(), ij.begin(), ij.end(), std::back_inserter(common));
      cells[1].push_back(common.size());
      long double d = 0;
      for (std::size_t k = 0; k < kNumTopics; ++k) d += std::pow((long double)pop.z(i)[k] - pop.z(j)[k], 2);
      cells[2].push_back(std::sqrt(d));
      const auto e = g.find_edge(i, j);
      cells[3].push_back(e ? model.state().int_count[*e] : 0.0L);
    }
  }
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    long double mean = 0;
    for (auto v : cells[f]) mean += v;
    mean /= cells[f].size();
    long double var = 0;
    for (auto v : cells[f]) var += (v - mean) * (v - mean);
    const double sd = static_cast<double>(std::sqrt(var / cells[f].size()));
    CAPTURE(f);
    CHECK(std::abs(model.stats()[f].mean - static_cast<double>(mean)) <= 1e-12);
    CHECK(std::abs(model.stats()[f].stddev - sd) <= 1e-12);
  }
}

TEST_CASE("zero padding of feature moments") {
  // {1, 3} padded with two zeros: {1, 3, 0, 0} has mean 1 and variance 1.5.
  const std::vector<double> col{1.0, 3.0};
  const auto s = pad_with_zeros(column_stats(col), 2, 4);
  CHECK(s.mean == doctest::Approx(1.0));
  CHECK(s.stddev == doctest::Approx(std::sqrt(1.5)));
  CHECK_THROWS_AS(pad_with_zeros(column_stats(col), 3, 2), ConfigError);
}

TEST_CASE("standardization scope names") {
  for (auto s : {StandardizationScope::AllPairs, StandardizationScope::FollowEdges}) {
    CHECK(parse_scope(to_string(s)) == s);
  }
  CHECK_FALSE(parse_scope("edges").has_value());
}

TEST_CASE("incremental and full-recompute statistics agree") {
  for (const auto scope : {StandardizationScope::FollowEdges, StandardizationScope::AllPairs}) {
    CAPTURE(to_string(scope));
    const auto pop = random_population(200, 40, 41);
    Rng rng(41);
    const auto g = sbm_graph(pop, SbmParams{}, rng);
    TieModel inc(g, pop, TieStrengthParams{}, EmaParams{0.01}, StatsMode::Incremental, scope);
    TieModel full(g, pop, TieStrengthParams{}, EmaParams{0.01}, StatsMode::FullRecompute, scope);
    Rng step_rng(42);
    for (int t = 0; t < 300; ++t) {
      std::vector<EdgeUpdate> ups;
      for (int k = 0; k < 150; ++k) {
        const auto e = static_cast<EdgeId>(step_rng.next() % g.edge_count());
        ups.push_back({e, step_rng.bernoulli(0.5)});
      }
      std::sort(ups.begin(), ups.end(), [](auto a, auto b) { return a.edge < b.edge; });
      ups.erase(std::unique(ups.begin(), ups.end(), [](auto a, auto b) { return a.edge == b.edge; }), ups.end());
      inc.apply_step(ups);
      full.apply_step(ups);
      const auto a = inc.stats()[static_cast<std::size_t>(Feature::IntCount)];
      const auto b = full.stats()[static_cast<std::size_t>(Feature::IntCount)];
      CHECK(std::abs(a.mean - b.mean) <= 1e-9);
      CHECK(std::abs(a.stddev - b.stddev) <= 1e-9);
      if (t % 50 == 0) {
        for (EdgeId e = 0; e < g.edge_count(); e += 7) CHECK(std::abs(inc.tie_strength(e) - full.tie_strength(e)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("TieModel rejects an edgeless graph") {
  const auto pop = uniform_population(3, 1);
  const DirectedGraph g(3, {});
  CHECK_THROWS_AS(TieModel(g, pop, TieStrengthParams{}, EmaParams{}), ConfigError);
}

TEST_CASE("unserved edges keep their raw features; without any service tie strengths are constant") {
  const auto pop = random_population(80, 16, 51);
  Rng rng(51);
  const auto g = sbm_graph(pop, SbmParams{}, rng);
  TieModel model(g, pop, TieStrengthParams{}, EmaParams{0.1});
  std::vector<double> before(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) before[e] = model.tie_strength(e);
  for (int t = 0; t < 20; ++t) model.apply_step({});
  for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(model.tie_strength(e) == before[e]);

  const EdgeState raw = model.state();
  std::vector<EdgeUpdate> ups{{0, true}, {1, false}};
  for (int t = 0; t < 20; ++t) model.apply_step(ups);
  for (EdgeId e = 2; e < g.edge_count(); ++e) {
    CHECK(model.state().int_count[e] == raw.int_count[e]);
    CHECK(model.state().out_edge[e] == raw.out_edge[e]);
    CHECK(model.state().in_edge[e] == raw.in_edge[e]);
    CHECK(model.state().dist[e] == raw.dist[e]);
  }
}

TEST_CASE("score_candidates examples") {
  const auto pop = make_population({Group::Majority, Group::Majority, Group::Minority, Group::Minority, Group::Majority},
                                   {{0.5, 0.4, 0.1}, {0.2, 0.2, 0.6}, {0.5, 0.1, 0.4}, {0.1, 0.1, 0.8}, {0.3, 0.3, 0.4}});
  const auto g = complete_graph(5);
  TieModel ties(g, pop, TieStrengthParams{}, EmaParams{});
  const ScoringContext ctx{pop, g, &ties};
  auto cand = [&](ContentId c, UserId creator, Topic topic) {
    return Candidate{c, creator, topic, *g.find_edge(0, creator)};
  };
  std::vector<double> out;

  SUBCASE("random is uniform") {
    const std::vector<Candidate> cs{cand(0, 1, Topic::Professional), cand(1, 2, Topic::Marginal),
                                    cand(2, 3, Topic::Mainstream), cand(3, 4, Topic::Marginal)};
    REQUIRE(score_candidates(PolicyKind::Random, 0, cs, ctx, out));
    for (double v : out) CHECK(v == 0.25);
  }
  SUBCASE("topic match uses the normalized preference") {
    const std::vector<Candidate> cs{cand(0, 1, Topic::Professional), cand(1, 2, Topic::Marginal)};
    REQUIRE(score_candidates(PolicyKind::TopicMatch, 0, cs, ctx, out));
    CHECK(std::abs(out[0] - 5.0 / 6.0) <= 1e-12);
    CHECK(std::abs(out[1] - 1.0 / 6.0) <= 1e-12);
  }
  SUBCASE("realgraph averages preference and tie strength") {
    const std::vector<Candidate> cs{cand(0, 1, Topic::Professional), cand(1, 3, Topic::Marginal)};
    REQUIRE(score_candidates(PolicyKind::RealGraph, 0, cs, ctx, out));
    const double a = 0.5 * (0.5 + ties.tie_strength(cs[0].edge));
    const double b = 0.5 * (0.1 + ties.tie_strength(cs[1].edge));
    CHECK(std::abs(out[0] - a / (a + b)) <= 1e-12);
    CHECK(std::abs(out[1] - b / (a + b)) <= 1e-12);
  }
  SUBCASE("empty candidate list signals no recommendation") {
    out.assign(3, 1.0);
    CHECK_FALSE(score_candidates(PolicyKind::RealGraph, 0, {}, ctx, out));
    CHECK(out.empty());
  }
  SUBCASE("candidate through a foreign edge is an integrity error") {
    const std::vector<Candidate> cs{Candidate{0, 2, Topic::Professional, *g.find_edge(1, 2)}};
    CHECK_THROWS_AS(score_candidates(PolicyKind::Random, 0, cs, ctx, out), IntegrityError);
  }
}

TEST_CASE("score_candidates rejects creators the viewer does not follow") {
  const auto pop = uniform_population(3, 1);
  const DirectedGraph g(3, {{0, 1}, {1, 2}});
  TieModel ties(g, pop, TieStrengthParams{}, EmaParams{});
  const ScoringContext ctx{pop, g, &ties};
  std::vector<double> out;
  const std::vector<Candidate> cs{Candidate{0, 2, Topic::Professional, *g.find_edge(1, 2)}};
  CHECK_THROWS_AS(score_candidates(PolicyKind::TopicMatch, 0, cs, ctx, out), IntegrityError);
}

TEST_CASE("score vectors sum to one") {
  const auto pop = random_population(60, 12, 61);
  Rng rng(61);
  const auto g = sbm_graph(pop, SbmParams{0.6, 0.6, 0.3, 0.3}, rng);
  TieModel ties(g, pop, TieStrengthParams{}, EmaParams{});
  const ScoringContext ctx{pop, g, &ties};
  std::vector<double> out;
  for (UserId viewer = 0; viewer < 60; ++viewer) {
    std::vector<Candidate> cs;
    const auto out_n = g.out_neighbors(viewer);
    for (std::size_t k = 0; k < out_n.size(); ++k) {
      cs.push_back(Candidate{static_cast<ContentId>(k), out_n[k], kTopics[k % 3],
                             g.first_out_edge(viewer) + static_cast<EdgeId>(k)});
    }
    for (PolicyKind p : {PolicyKind::Random, PolicyKind::TopicMatch, PolicyKind::RealGraph}) {
      if (cs.empty()) continue;
      REQUIRE(score_candidates(p, viewer, cs, ctx, out));
      const double sum = std::accumulate(out.begin(), out.end(), 0.0);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      for (double v : out) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("policy names round trip") {
  for (PolicyKind p : {PolicyKind::Random, PolicyKind::TopicMatch, PolicyKind::RealGraph}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  CHECK_FALSE(parse_policy("popular").has_value());
}

TEST_CASE("tie summary splits edges by pair class") {
  const auto pop = uniform_population(4, 2);
  const auto g = complete_graph(4);
  TieModel ties(g, pop, TieStrengthParams{}, EmaParams{0.5});
  ties.apply_step(std::vector<EdgeUpdate>{{*g.find_edge(0, 1), true}});
  const auto rows = summarize_ties(3, ties, g, pop);
  const auto& in = rows[0].in_group ? rows[0] : rows[1];
  const auto& cross = rows[0].in_group ? rows[1] : rows[0];
  CHECK(in.t == 3);
  CHECK(in.mean_int_count == doctest::Approx(0.5 / 4.0));  // four in-group edges
  CHECK(cross.mean_int_count == 0.0);
  std::stringstream buf;
  write_tie_summary_csv(buf, rows);
  CHECK(buf.str().rfind("t,pair_class,mean_int_count,mean_tie_strength\n", 0) == 0);
  CHECK(buf.str().find("in_group") != std::string::npos);
  CHECK(buf.str().find("cross_group") != std::string::npos);
}
