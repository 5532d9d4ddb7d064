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

#include <cstdint>
#include <random>

namespace feedloop {

/// Independent named random streams. A run derives one generator per stream
/// from its seed, so e.g. switching the policy leaves content creation
/// untouched.
enum class Stream : std::uint64_t {
  Population = 1,
  Graph = 2,
  Creation = 3,
  Request = 4,
  Sampling = 5,
  Interaction = 6,
};

/// mt19937_64 with distribution transforms written out explicitly: the
/// standard library's distributions are implementation-defined, which would
/// break cross-platform reproducibility of event logs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Box-Muller, one draw per call.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

Rng make_stream(std::uint64_t seed, Stream stream);

}  // namespace feedloop
