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
#include <span>
#include <string>
#include <vector>

#include "feedloop/metrics.hpp"

namespace feedloop::svg {

struct Point {
  double x;
  double y;  // NaN breaks a line
};

struct Series {
  std::string label;
  std::vector<Point> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Fixed 640x400 viewport; plot area x in [70, 620], y in [40, 350].
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 620.0;
inline constexpr double kTop = 40.0;
inline constexpr double kBottom = 350.0;

Series from_time_series(std::string label, const TimeSeries& series);

/// Polyline per series, split at NaN points. Deterministic text output.
std::string render_lines(const PlotSpec& spec, std::span<const Series> series);

/// Dots for `scatter`, straight segments for `lines`.
std::string render_scatter(const PlotSpec& spec, std::span<const Series> scatter, std::span<const Series> lines);

struct RenderReport {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

/// Renders every known metric CSV found in `dir` to an .svg next to it.
/// Missing or empty series produce a warning and no file.
RenderReport render_metrics_dir(const std::filesystem::path& dir);

}  // namespace feedloop::svg
