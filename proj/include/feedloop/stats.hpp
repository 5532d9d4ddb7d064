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

#include <cstddef>
#include <optional>
#include <span>

namespace feedloop {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double x, double a, double b);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct CorrelationResult {
  double rho;
  double p_value;
  std::size_t n;
};

/// Pearson correlation with a two-sided t-test on n - 2 degrees of freedom.
/// Throws UndefinedStatistic for n < 3, unequal lengths or zero variance.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope;
  double intercept;
  std::size_t n;
};

/// Ordinary least squares y = slope * x + intercept. nullopt when x has
/// fewer than two distinct values.
std::optional<LinearFit> least_squares(std::span<const double> x, std::span<const double> y);

struct MeanTest {
  double mean;
  double t;
  double p_value;  // two-sided, H0: mean == 0
  std::size_t n;
};

/// One-sample t-test of the sample mean against zero. Throws
/// UndefinedStatistic for n < 2. Zero spread gives t = ±inf (p = 0) unless
/// the mean is also 0.
MeanTest one_sample_t_test(std::span<const double> sample);

}  // namespace feedloop
