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

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "feedloop/metrics.hpp"
#include "feedloop/svg.hpp"
#include "helpers.hpp"

using namespace feedloop;
using feedloop::testing::slurp;
using feedloop::testing::TempDir;

TEST_CASE("a two-point series spans the plot area") {
  const svg::Series s{"ratio", {{0.0, 0.0}, {1.0, 1.0}}};
  const std::string out = svg::render_lines({"t", "x", "y"}, std::span<const svg::Series>(&s, 1));
  CHECK(out.find(R"(points="70.00,350.00 620.00,40.00")") != std::string::npos);
  CHECK(out.rfind("<svg", 0) == 0);
  CHECK(out.find("</svg>") != std::string::npos);
}

TEST_CASE("undefined points split a line") {
  const svg::Series s{"gap", {{0.0, 0.0}, {1.0, 1.0}, {2.0, std::nan("")}, {3.0, 0.5}, {4.0, 1.0}}};
  const std::string out = svg::render_lines({"t", "x", "y"}, std::span<const svg::Series>(&s, 1));
  std::size_t lines = 0;
  for (std::size_t p = out.find("<polyline"); p != std::string::npos; p = out.find("<polyline", p + 1)) ++lines;
  CHECK(lines == 2);
}

TEST_CASE("metric directories render deterministically") {
  TempDir dir("svg_dir");
  TimeSeries s;
  for (Step t = 0; t < 50; ++t) s.push(t, 0.8 - 0.001 * t);
  {
    std::ofstream out(dir.path() / "ratio_prof.csv");
    write_series_csv(out, s, "ratio_ma");
  }
  {
    std::ofstream out(dir.path() / "int_gap.csv");
    write_series_csv(out, TimeSeries{}, "gap_ma");
  }
  const auto first = svg::render_metrics_dir(dir.path());
  REQUIRE(first.written.size() == 1);
  CHECK(first.written[0].filename() == "ratio_prof.svg");
  CHECK_FALSE(std::filesystem::exists(dir.path() / "int_gap.svg"));
  bool empty_warned = false;
  for (const auto& w : first.warnings) empty_warned |= w.find("int_gap.csv") != std::string::npos;
  CHECK(empty_warned);

  const std::string a = slurp(dir.path() / "ratio_prof.svg");
  svg::render_metrics_dir(dir.path());
  CHECK(slurp(dir.path() / "ratio_prof.svg") == a);
}
