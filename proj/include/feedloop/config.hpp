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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "feedloop/engine.hpp"
#include "feedloop/metrics.hpp"
#include "feedloop/netgen.hpp"
#include "feedloop/population.hpp"

namespace feedloop {

enum class GraphKind : std::uint8_t { Complete, Random, Sbm, File };
std::string_view to_string(GraphKind k);

struct GraphConfig {
  GraphKind kind = GraphKind::Sbm;
  RandomGraphParams random{};
  SbmParams sbm{};
  std::string path;              // edge-list CSV, kind == File
  std::optional<std::size_t> n;  // node count of the file graph
};

/// Full parameterization of an experiment: one simulation per seed.
struct ExperimentConfig {
  PopulationConfig population{};
  GraphConfig graph{};
  EngineConfig engine{};
  MetricsConfig metrics{};
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  bool write_logs = true;

  /// Throws ConfigError naming the offending field(s).
  void validate() const;
};

/// Defaults: n=1000, T=10000, p_c=0.2, p_r=0.8, beta=(1,1,-1,5), alpha=0.01,
/// homophilic SBM (min-min 0.5, maj-maj 0.4, cross 0.1), 20% minority,
/// burn-in 2500, seeds 1..20.
ExperimentConfig default_config();

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

/// Strict: unknown keys and wrong types are ConfigErrors naming the key.
/// Missing keys keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(std::string_view text);
/// An empty file yields default_config(). Throws ConfigError (bad content)
/// or IoError (unreadable file).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// SHA-256 of the canonical JSON dump of the resolved config.
std::string config_hash(const ExperimentConfig& config);

}  // namespace feedloop
