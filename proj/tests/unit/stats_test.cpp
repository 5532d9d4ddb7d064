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

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "feedloop/errors.hpp"
#include "feedloop/rng.hpp"
#include "feedloop/stats.hpp"

using namespace feedloop;

namespace {

double boost_two_sided(double t, double df) {
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

// Independent Pearson: long double moments, Boost Student-t tail.
std::pair<double, double> oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0;
  long double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0;
  long double sxx = 0;
  long double syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double rho = static_cast<double>(sxy / std::sqrt(sxx * syy));
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  return {rho, boost_two_sided(t, df)};
}

}  // namespace

TEST_CASE("regularized incomplete beta against Boost") {
  for (double a : {0.5, 1.0, 1.5, 3.0, 10.0, 47.5}) {
    for (double b : {0.5, 1.0, 2.0, 7.0, 120.0}) {
      for (double x : {0.0, 1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(std::abs(regularized_incomplete_beta(x, a, b) - boost::math::ibeta(a, b, x)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Student t two-sided tail against Boost") {
  for (double df : {1.0, 2.0, 3.0, 5.0, 18.0, 198.0, 1998.0}) {
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 2.776, 5.0, 12.0, -3.0}) {
      CAPTURE(df);
      CAPTURE(t);
      CHECK(std::abs(student_t_two_sided_p(t, df) - boost_two_sided(t, df)) <= 1e-10);
    }
  }
  CHECK(student_t_two_sided_p(0.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pearson reference examples") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  // rho = 0.8 exactly: t = 0.8 * sqrt(3 / 0.36) on 3 degrees of freedom.
  const std::vector<double> y{2, 1, 4, 3, 5};
  const auto r = pearson(x, y);
  CHECK(r.n == 5);
  CHECK(r.rho == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(std::abs(r.p_value - 0.10408803866182778) <= 1e-8);
  CHECK(std::abs(r.p_value - oracle_pearson(x, y).second) <= 1e-8);

  const std::vector<double> y2{2, 1, 4, 3, 6};
  const auto r2 = pearson(x, y2);
  CHECK(r2.rho == doctest::Approx(0.8219949365267865).epsilon(1e-13));
  CHECK(std::abs(r2.p_value - 0.08770664700806553) <= 1e-8);
}

TEST_CASE("pearson perfect correlation") {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> down{3, 2, 1};
  const auto up = pearson(x, x);
  CHECK(up.rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(up.p_value == 0.0);
  CHECK(pearson(x, down).rho == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("pearson p-values against the Boost oracle on 24 fixed vectors") {
  Rng rng(20240601);
  int checked = 0;
  for (std::size_t n : {3u, 4u, 5u, 6u, 8u, 10u, 12u, 15u, 20u, 25u, 30u, 50u, 80u, 100u, 200u, 500u, 1000u, 2000u}) {
    for (double coupling : {0.0, 0.3}) {
      if (checked >= 24 && coupling > 0.0) continue;
      std::vector<double> x(n);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal(0, 1);
        y[i] = coupling * x[i] + rng.normal(0, 1);
      }
      const auto r = pearson(x, y);
      const auto [rho, p] = oracle_pearson(x, y);
      CAPTURE(n);
      CHECK(std::abs(r.rho - rho) <= 1e-12);
      CHECK(std::abs(r.p_value - p) <= 1e-8);
      CHECK(r.p_value >= 0.0);
      CHECK(r.p_value <= 1.0);
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("pearson is affine invariant") {
  Rng rng(3);
  std::vector<double> x(40);
  std::vector<double> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = rng.normal(0, 1);
    y[i] = x[i] + rng.normal(0, 2);
  }
  const auto base = pearson(x, y);
  std::vector<double> ax(40);
  std::vector<double> cy(40);
  std::vector<double> neg(40);
  for (std::size_t i = 0; i < 40; ++i) {
    ax[i] = 3.5 * x[i] - 7.0;
    cy[i] = 0.01 * y[i] + 100.0;
    neg[i] = -2.0 * x[i] + 1.0;
  }
  CHECK(std::abs(pearson(ax, cy).rho - base.rho) <= 1e-12);
  CHECK(std::abs(pearson(ax, cy).p_value - base.p_value) <= 1e-12);
  CHECK(std::abs(pearson(neg, y).rho + base.rho) <= 1e-12);
}

TEST_CASE("pearson undefined cases") {
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), UndefinedStatistic);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), UndefinedStatistic);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedStatistic);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}), UndefinedStatistic);
}

TEST_CASE("least squares") {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(i * 0.5);
    y.push_back(2.0 * (i * 0.5) + 1.0);
  }
  const auto fit = least_squares(x, y);
  REQUIRE(fit.has_value());
  CHECK(std::abs(fit->slope - 2.0) <= 1e-9);
  CHECK(std::abs(fit->intercept - 1.0) <= 1e-9);
  CHECK(fit->n == 20);
  CHECK_FALSE(least_squares(std::vector<double>{3, 3, 3}, std::vector<double>{1, 2, 3}).has_value());
  CHECK_FALSE(least_squares(std::vector<double>{}, std::vector<double>{}).has_value());
}

TEST_CASE("one-sample t-test against Boost") {
  const std::vector<double> s{-0.3, -0.1, -0.25, 0.05, -0.2, -0.15};
  const auto r = one_sample_t_test(s);
  double mean = 0;
  for (double v : s) mean += v;
  mean /= 6.0;
  double ss = 0;
  for (double v : s) ss += (v - mean) * (v - mean);
  const double t = mean / std::sqrt(ss / 5.0 / 6.0);
  CHECK(r.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(r.t == doctest::Approx(t).epsilon(1e-12));
  CHECK(std::abs(r.p_value - boost_two_sided(t, 5.0)) <= 1e-10);
  CHECK(r.n == 6);
  CHECK_THROWS_AS(one_sample_t_test(std::vector<double>{1.0}), UndefinedStatistic);
  const auto flat = one_sample_t_test(std::vector<double>{0.0, 0.0, 0.0});
  CHECK(flat.p_value == 1.0);
  const auto constant = one_sample_t_test(std::vector<double>{-1.0, -1.0});
  CHECK(constant.p_value == 0.0);
}
