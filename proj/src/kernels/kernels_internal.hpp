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

#include "feedloop/kernels.hpp"

namespace feedloop::kernels {

inline constexpr std::size_t kLanes = 4;

// Fixed reduction tree shared by every variant.
inline double combine_lanes(const double* lane) {
  const double lo = lane[0] + lane[1];
  const double hi = lane[2] + lane[3];
  return lo + hi;
}

#if defined(FEEDLOOP_WITH_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace feedloop::kernels
