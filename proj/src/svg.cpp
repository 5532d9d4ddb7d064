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

#include "feedloop/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop::svg {
namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

class Canvas {
 public:
  Canvas(const PlotSpec& spec, Range x, Range y) : x_(x), y_(y) {
    x_.finalize();
    y_.finalize();
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out_ << "<text x=\"345\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
         << escape(spec.title) << "</text>\n";
    out_ << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kBottom) << "\" x2=\"" << fixed2(kRight)
         << "\" y2=\"" << fixed2(kBottom) << "\" stroke=\"black\"/>\n";
    out_ << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop) << "\" x2=\"" << fixed2(kLeft)
         << "\" y2=\"" << fixed2(kBottom) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      const double fy = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      out_ << "<text x=\"" << fixed2(sx(fx)) << "\" y=\"" << fixed2(kBottom + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << tick_label(fx)
           << "</text>\n";
      out_ << "<text x=\"" << fixed2(kLeft - 6) << "\" y=\"" << fixed2(sy(fy) + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << tick_label(fy)
           << "</text>\n";
    }
    out_ << "<text x=\"345\" y=\"390\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         << escape(spec.x_label) << "</text>\n";
    out_ << "<text x=\"16\" y=\"195\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            "transform=\"rotate(-90 16 195)\">"
         << escape(spec.y_label) << "</text>\n";
  }

  double sx(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kRight - kLeft); }
  double sy(double y) const { return kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kBottom - kTop); }

  void polyline(const std::vector<Point>& pts, const char* color) {
    std::string coords;
    auto flush = [&] {
      if (!coords.empty()) {
        out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << coords
             << "\"/>\n";
      }
      coords.clear();
    };
    for (const auto& p : pts) {
      if (!std::isfinite(p.y) || !std::isfinite(p.x)) {
        flush();
        continue;
      }
      if (!coords.empty()) coords += ' ';
      coords += fixed2(sx(p.x)) + "," + fixed2(sy(p.y));
    }
    flush();
  }

  void dots(const std::vector<Point>& pts, const char* color) {
    for (const auto& p : pts) {
      if (!std::isfinite(p.y) || !std::isfinite(p.x)) continue;
      out_ << "<circle cx=\"" << fixed2(sx(p.x)) << "\" cy=\"" << fixed2(sy(p.y)) << "\" r=\"1.5\" fill=\"" << color
           << "\" fill-opacity=\"0.5\"/>\n";
    }
  }

  void legend(std::size_t slot, const std::string& label, const char* color) {
    const double y = kTop + 12.0 * static_cast<double>(slot) + 4.0;
    out_ << "<rect x=\"" << fixed2(kRight - 150) << "\" y=\"" << fixed2(y - 7) << "\" width=\"8\" height=\"8\" fill=\""
         << color << "\"/>\n";
    out_ << "<text x=\"" << fixed2(kRight - 138) << "\" y=\"" << fixed2(y)
         << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(label) << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Range x_;
  Range y_;
  std::ostringstream out_;
};

void include_all(std::span<const Series> series, Range& x, Range& y) {
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (std::isfinite(p.x) && std::isfinite(p.y)) {
        x.include(p.x);
        y.include(p.y);
      }
    }
  }
}

}  // namespace

Series from_time_series(std::string label, const TimeSeries& series) {
  Series s{std::move(label), {}};
  s.points.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    s.points.push_back(Point{static_cast<double>(series.t[i]),
                             series.v[i] ? *series.v[i] : std::numeric_limits<double>::quiet_NaN()});
  }
  return s;
}

std::string render_lines(const PlotSpec& spec, std::span<const Series> series) {
  Range x;
  Range y;
  include_all(series, x, y);
  Canvas c(spec, x, y);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    c.polyline(series[i].points, color);
    if (!series[i].label.empty()) c.legend(i, series[i].label, color);
  }
  return c.finish();
}

std::string render_scatter(const PlotSpec& spec, std::span<const Series> scatter, std::span<const Series> lines) {
  Range x;
  Range y;
  include_all(scatter, x, y);
  include_all(lines, x, y);
  Canvas c(spec, x, y);
  for (std::size_t i = 0; i < scatter.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    c.dots(scatter[i].points, color);
    if (!scatter[i].label.empty()) c.legend(i, scatter[i].label, color);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) c.polyline(lines[i].points, kPalette[i % kPalette.size()]);
  return c.finish();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error while writing " + path.string());
}

struct LinePlot {
  const char* csv;
  const char* svg;
  PlotSpec spec;
};

const std::array<LinePlot, 3> kLinePlots{{
    {"ratio_prof.csv", "ratio_prof.svg",
     {"Professional recommendations, minority / majority (moving average)", "time step", "ratio"}},
    {"ratio_prof_per_item.csv", "ratio_prof_per_item.svg",
     {"Professional recommendations per item, minority / majority", "time step", "ratio"}},
    {"int_gap.csv", "int_gap.svg",
     {"Interaction count, in-group minus cross-group pairs (moving average)", "time step", "gap"}},
}};

}  // namespace

RenderReport render_metrics_dir(const std::filesystem::path& dir) {
  RenderReport report;
  for (const auto& plot : kLinePlots) {
    const auto csv_path = dir / plot.csv;
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) {
      report.warnings.push_back(std::string("missing series ") + plot.csv + ", skipped");
      continue;
    }
    std::string name;
    const TimeSeries series = read_series_csv(in, &name);
    if (series.defined_count() == 0) {
      report.warnings.push_back(std::string("empty series ") + plot.csv + ", skipped");
      continue;
    }
    const Series s = from_time_series(name, series);
    write_text(dir / plot.svg, render_lines(plot.spec, std::span<const Series>(&s, 1)));
    report.written.push_back(dir / plot.svg);
  }

  // Recommendations per item against in-degree, one panel per topic.
  const auto scatter_path = dir / "recs_vs_in.csv";
  std::ifstream in(scatter_path, std::ios::binary);
  if (!in) {
    report.warnings.push_back("missing series recs_vs_in.csv, skipped");
    return report;
  }
  csv::expect_header(in, "user_id,group,topic,in_degree,recs_per_item");
  std::map<std::pair<Topic, Group>, Series> groups;
  std::string line;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 5) throw IoError("recs_vs_in row '" + line + "' must have five fields");
    const auto g = parse_group(f[1]);
    const auto t = parse_topic(f[2]);
    if (!g || !t) throw IoError("recs_vs_in row '" + line + "' has an unknown group or topic");
    auto& s = groups[{*t, *g}];
    s.label = std::string(to_string(*g));
    s.points.push_back(Point{csv::parse_double(f[3]), csv::parse_double(f[4])});
  }
  for (Topic topic : kTopics) {
    std::vector<Series> scatter;
    std::vector<Series> lines;
    for (Group g : kGroups) {
      const auto it = groups.find({topic, g});
      if (it == groups.end() || it->second.points.empty()) continue;
      scatter.push_back(it->second);
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& p : it->second.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
      }
      if (const auto fit = least_squares(xs, ys)) {
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        lines.push_back(Series{"", {{*lo, fit->slope * *lo + fit->intercept}, {*hi, fit->slope * *hi + fit->intercept}}});
      } else {
        lines.push_back(Series{"", {}});
      }
    }
    const std::string file = "recs_vs_in_" + std::string(to_string(topic)) + ".svg";
    if (scatter.empty()) {
      report.warnings.push_back("no " + std::string(to_string(topic)) + " rows in recs_vs_in.csv, skipped");
      continue;
    }
    const PlotSpec spec{"Recommendations per " + std::string(to_string(topic)) + " item vs followers",
                        "incoming edges", "recommendations per item"};
    write_text(dir / file, render_scatter(spec, scatter, lines));
    report.written.push_back(dir / file);
  }
  return report;
}

}  // namespace feedloop::svg
