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

#include "feedloop/eventlog_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "feedloop/csv.hpp"
#include "feedloop/errors.hpp"

namespace feedloop {

namespace {
constexpr std::string_view kContentHeader = "step,content_id,creator_id,topic";
constexpr std::string_view kRecsHeader = "step,viewer_id,content_id,interacted";
}  // namespace

void write_content_csv(std::ostream& out, const EventLog& log) {
  out << kContentHeader << '\n';
  for (const auto& c : log.content) {
    out << c.created_at << ',' << c.id << ',' << c.creator << ',' << to_string(c.topic) << '\n';
  }
}

void write_recs_csv(std::ostream& out, const EventLog& log) {
  out << kRecsHeader << '\n';
  for (const auto& r : log.recs) {
    out << r.step << ',' << r.viewer << ',' << r.content << ',' << (r.interacted ? '1' : '0') << '\n';
  }
}

std::vector<ContentItem> read_content_csv(std::istream& in) {
  csv::expect_header(in, kContentHeader);
  std::vector<ContentItem> items;
  std::string line;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 4) throw IoError("content row '" + line + "' must have four fields");
    const auto topic = parse_topic(f[3]);
    if (!topic) throw IoError("unknown topic '" + std::string(f[3]) + "'");
    ContentItem c{static_cast<ContentId>(csv::parse_uint(f[1])), static_cast<UserId>(csv::parse_uint(f[2])),
                  *topic, static_cast<Step>(csv::parse_uint(f[0]))};
    if (c.id != items.size()) throw IoError("content ids must be consecutive from 0");
    items.push_back(c);
  }
  return items;
}

std::vector<RecommendationEvent> read_recs_csv(std::istream& in) {
  csv::expect_header(in, kRecsHeader);
  std::vector<RecommendationEvent> recs;
  std::string line;
  while (csv::next_row(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 4) throw IoError("recommendation row '" + line + "' must have four fields");
    if (f[3] != "0" && f[3] != "1") throw IoError("interacted must be 0 or 1");
    recs.push_back(RecommendationEvent{static_cast<Step>(csv::parse_uint(f[0])),
                                       static_cast<UserId>(csv::parse_uint(f[1])),
                                       static_cast<ContentId>(csv::parse_uint(f[2])), f[3] == "1"});
    if (recs.size() > 1 && recs.back().step < recs[recs.size() - 2].step) {
      throw IoError("recommendations must be ordered by step");
    }
  }
  return recs;
}

}  // namespace feedloop
