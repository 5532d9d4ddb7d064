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

#include "feedloop/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "feedloop/errors.hpp"

namespace feedloop::csv {

std::string format(double v) {
  if (std::isnan(v)) return std::string(kUndefined);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

std::string format(const std::optional<double>& v) {
  return v ? format(*v) : std::string(kUndefined);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError("malformed number '" + std::string(field) + "'");
  }
  return v;
}

std::optional<double> parse_optional_double(std::string_view field) {
  if (field == kUndefined) return std::nullopt;
  return parse_double(field);
}

std::uint64_t parse_uint(std::string_view field) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError("malformed integer '" + std::string(field) + "'");
  }
  return v;
}

bool next_row(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& in, std::string_view expected) {
  std::string line;
  if (!next_row(in, line)) throw IoError("missing CSV header, expected '" + std::string(expected) + "'");
  if (line != expected) {
    throw IoError("unexpected CSV header '" + line + "', expected '" + std::string(expected) + "'");
  }
}

void Writer::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

Writer& Writer::field(std::string_view s) {
  sep();
  out_ << s;
  return *this;
}

Writer& Writer::field(double v) {
  sep();
  out_ << format(v);
  return *this;
}

Writer& Writer::field(const std::optional<double>& v) {
  sep();
  out_ << format(v);
  return *this;
}

Writer& Writer::field(std::uint64_t v) {
  sep();
  out_ << v;
  return *this;
}

Writer& Writer::field(std::int64_t v) {
  sep();
  out_ << v;
  return *this;
}

void Writer::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace feedloop::csv
