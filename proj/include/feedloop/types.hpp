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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace feedloop {

using UserId = std::uint32_t;
using ContentId = std::uint32_t;
using EdgeId = std::uint32_t;
using Step = std::uint32_t;

enum class Group : std::uint8_t { Majority = 0, Minority = 1 };
inline constexpr std::array<Group, 2> kGroups{Group::Majority, Group::Minority};

enum class Topic : std::uint8_t { Professional = 0, Mainstream = 1, Marginal = 2 };
inline constexpr std::size_t kNumTopics = 3;
inline constexpr std::array<Topic, kNumTopics> kTopics{Topic::Professional, Topic::Mainstream,
                                                       Topic::Marginal};

/// Per-topic values indexed (professional, mainstream, marginal).
using TopicVector = std::array<double, kNumTopics>;

constexpr std::size_t index(Group g) { return static_cast<std::size_t>(g); }
constexpr std::size_t index(Topic t) { return static_cast<std::size_t>(t); }

constexpr std::string_view to_string(Group g) {
  return g == Group::Majority ? "majority" : "minority";
}

constexpr std::string_view to_string(Topic t) {
  switch (t) {
    case Topic::Professional: return "professional";
    case Topic::Mainstream: return "mainstream";
    case Topic::Marginal: return "marginal";
  }
  return "?";
}

std::optional<Group> parse_group(std::string_view s);
std::optional<Topic> parse_topic(std::string_view s);

}  // namespace feedloop
