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

#include <bit>

#include "kernels_internal.hpp"

namespace feedloop::kernels {
namespace {

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

double lane_sum_scalar(const double* x, std::size_t n) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) lane[k] += x[i + k];
  }
  for (std::size_t k = 0; i + k < n; ++k) lane[k] += x[i + k];
  return combine_lanes(lane);
}

double lane_sum_sq_dev_scalar(const double* x, std::size_t n, double center) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) {
      const double d = x[i + k] - center;
      lane[k] += d * d;
    }
  }
  for (std::size_t k = 0; i + k < n; ++k) {
    const double d = x[i + k] - center;
    lane[k] += d * d;
  }
  return combine_lanes(lane);
}

void standardize_scalar(const double* x, std::size_t n, double mean, double sd, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - mean) / sd;
}

void weighted_sum3_scalar(const double* a, const double* b, const double* c, std::size_t n,
                          double wa, double wb, double wc, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ab = wa * a[i] + wb * b[i];
    out[i] = ab + wc * c[i];
  }
}

constexpr KernelTable kScalar{
    "scalar",      and_popcount_scalar, lane_sum_scalar, lane_sum_sq_dev_scalar,
    standardize_scalar, weighted_sum3_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace feedloop::kernels
