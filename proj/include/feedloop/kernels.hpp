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

// Data-parallel inner loops used by the tie-strength model.
//
// Every kernel has a scalar reference and, where the CPU supports it, an AVX2
// variant. The variants are required to produce bit-identical results: the
// floating-point reductions use a fixed four-lane accumulation order in both,
// so a simulation gives the same event log whichever table is active.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace feedloop::kernels {

struct KernelTable {
  const char* name;
  // popcount(a & b) over `words` 64-bit words.
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // Sum with four interleaved accumulators combined as (l0 + l1) + (l2 + l3).
  double (*lane_sum)(const double* x, std::size_t n);
  // Sum of (x - center)^2, same accumulation order as lane_sum.
  double (*lane_sum_sq_dev)(const double* x, std::size_t n, double center);
  // out[i] = (x[i] - mean) / sd
  void (*standardize)(const double* x, std::size_t n, double mean, double sd, double* out);
  // out[i] = (wa * a[i] + wb * b[i]) + wc * c[i]
  void (*weighted_sum3)(const double* a, const double* b, const double* c, std::size_t n,
                        double wa, double wb, double wc, double* out);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Table used by the span-level helpers below. Chosen once at first use:
/// AVX2 when available unless FEEDLOOP_KERNELS=scalar is set.
const KernelTable& active();

/// Force a table by name ("scalar" or "avx2"). Returns false if unavailable.
bool select(std::string_view name);

std::vector<const KernelTable*> available_tables();

// Span-level entry points dispatching through active().

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double lane_sum(std::span<const double> x);
double lane_sum_sq_dev(std::span<const double> x, double center);
void standardize(std::span<const double> x, double mean, double sd, std::span<double> out);
void weighted_sum3(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                   double wa, double wb, double wc, std::span<double> out);

}  // namespace feedloop::kernels
