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

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "kernels_internal.hpp"

namespace feedloop::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FEEDLOOP_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("FEEDLOOP_KERNELS"); env != nullptr) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(FEEDLOOP_WITH_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  for (const KernelTable* t : available_tables()) {
    if (name == t->name) {
      current().store(t, std::memory_order_release);
      return true;
    }
  }
  return false;
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  return out;
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  check_sizes(a.size(), b.size());
  return active().and_popcount(a.data(), b.data(), a.size());
}

double lane_sum(std::span<const double> x) { return active().lane_sum(x.data(), x.size()); }

double lane_sum_sq_dev(std::span<const double> x, double center) {
  return active().lane_sum_sq_dev(x.data(), x.size(), center);
}

void standardize(std::span<const double> x, double mean, double sd, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().standardize(x.data(), x.size(), mean, sd, out.data());
}

void weighted_sum3(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                   double wa, double wb, double wc, std::span<double> out) {
  check_sizes(a.size(), out.size());
  check_sizes(b.size(), out.size());
  check_sizes(c.size(), out.size());
  active().weighted_sum3(a.data(), b.data(), c.data(), a.size(), wa, wb, wc, out.data());
}

}  // namespace feedloop::kernels
