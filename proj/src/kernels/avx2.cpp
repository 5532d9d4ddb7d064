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

#include <immintrin.h>

#include <bit>

#include "kernels_internal.hpp"

namespace feedloop::kernels {
namespace {

// Nibble lookup popcount (Mula et al.), horizontal byte sums via SAD.
std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i v = _mm256_and_si256(va, vb);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt =
        _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, zero));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

double lane_sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  for (std::size_t k = 0; i + k < n; ++k) lane[k] += x[i + k];
  return combine_lanes(lane);
}

double lane_sum_sq_dev_avx2(const double* x, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  for (std::size_t k = 0; i + k < n; ++k) {
    const double d = x[i + k] - center;
    lane[k] += d * d;
  }
  return combine_lanes(lane);
}

void standardize_avx2(const double* x, std::size_t n, double mean, double sd, double* out) {
  const __m256d m = _mm256_set1_pd(mean);
  const __m256d s = _mm256_set1_pd(sd);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), m), s));
  }
  for (; i < n; ++i) out[i] = (x[i] - mean) / sd;
}

void weighted_sum3_avx2(const double* a, const double* b, const double* c, std::size_t n,
                        double wa, double wb, double wc, double* out) {
  const __m256d va = _mm256_set1_pd(wa);
  const __m256d vb = _mm256_set1_pd(wb);
  const __m256d vc = _mm256_set1_pd(wc);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d ab = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(a + i)),
                                     _mm256_mul_pd(vb, _mm256_loadu_pd(b + i)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ab, _mm256_mul_pd(vc, _mm256_loadu_pd(c + i))));
  }
  for (; i < n; ++i) {
    const double ab = wa * a[i] + wb * b[i];
    out[i] = ab + wc * c[i];
  }
}

constexpr KernelTable kAvx2{
    "avx2",           and_popcount_avx2, lane_sum_avx2, lane_sum_sq_dev_avx2,
    standardize_avx2, weighted_sum3_avx2,
};

}  // namespace

const KernelTable& avx2_table_unchecked() { return kAvx2; }

}  // namespace feedloop::kernels
