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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "feedloop/population.hpp"

namespace feedloop::testing {

/// Population with explicit groups and preference vectors.
inline Population make_population(const std::vector<Group>& groups, const std::vector<TopicVector>& z) {
  std::vector<UserProfile> users;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    users.push_back(UserProfile{static_cast<UserId>(i), groups[i], z.empty() ? TopicVector{0.5, 0.3, 0.2} : z[i]});
  }
  return Population(std::move(users));
}

/// `minority` users first, then majority, all with the same preferences.
inline Population uniform_population(std::size_t n, std::size_t minority, TopicVector z = {0.5, 0.3, 0.2}) {
  std::vector<Group> groups(n, Group::Majority);
  for (std::size_t i = 0; i < minority; ++i) groups[i] = Group::Minority;
  return make_population(groups, std::vector<TopicVector>(n, z));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("feedloop_" + tag + "_" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace feedloop::testing
