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

#include <stdexcept>
#include <string>

namespace feedloop {

/// Invalid or inconsistent configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  static constexpr int kExitCode = 2;
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant (event on a non-edge, bad weights, ...). CLI exit code 3.
class IntegrityError : public std::runtime_error {
 public:
  static constexpr int kExitCode = 3;
  using std::runtime_error::runtime_error;
};

/// Filesystem or parse failure on stored artifacts. CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  static constexpr int kExitCode = 4;
  using std::runtime_error::runtime_error;
};

/// A statistic was requested whose definition needs a non-empty sample or
/// non-zero variance.
class UndefinedStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace feedloop
