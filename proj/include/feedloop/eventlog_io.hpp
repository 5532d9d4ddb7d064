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

#include <iosfwd>
#include <vector>

#include "feedloop/engine.hpp"

namespace feedloop {

/// `step,content_id,creator_id,topic`
void write_content_csv(std::ostream& out, const EventLog& log);
/// `step,viewer_id,content_id,interacted`
void write_recs_csv(std::ostream& out, const EventLog& log);

/// Throws IoError on malformed rows, ids out of order or unknown topics.
std::vector<ContentItem> read_content_csv(std::istream& in);
std::vector<RecommendationEvent> read_recs_csv(std::istream& in);

}  // namespace feedloop
