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

// Minimal CSV helpers: header row, comma separator, '\n' line endings,
// '.' decimal separator, shortest round-trip formatting for doubles.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace feedloop::csv {

/// Marker written for undefined values.
inline constexpr std::string_view kUndefined = "NA";

std::string format(double v);
std::string format(const std::optional<double>& v);

std::vector<std::string_view> split(std::string_view line);

double parse_double(std::string_view field);
std::optional<double> parse_optional_double(std::string_view field);
std::uint64_t parse_uint(std::string_view field);

/// Reads the header row and checks it matches `expected`. Throws IoError.
void expect_header(std::istream& in, std::string_view expected);

/// Next non-empty line; false at end of stream.
bool next_row(std::istream& in, std::string& line);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& field(std::string_view s);
  Writer& field(double v);
  Writer& field(const std::optional<double>& v);
  Writer& field(std::uint64_t v);
  Writer& field(std::int64_t v);
  Writer& field(std::uint32_t v) { return field(static_cast<std::uint64_t>(v)); }
  Writer& field(int v) { return field(static_cast<std::int64_t>(v)); }
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace feedloop::csv
