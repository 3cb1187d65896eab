// Copyright 2026 The chartdyn Authors.
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

// Exact batch compilation of top-K charts from event streams.

#ifndef CHARTDYN_CHARTGEN_HPP_
#define CHARTDYN_CHARTGEN_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "chartdyn/ingest.hpp"
#include "chartdyn/series.hpp"

namespace chartdyn {

struct CompileOptions {
  std::int64_t period_seconds = 3600;
  int slots = 100;  // K
  // Periods are [origin + i*period, origin + (i+1)*period). Defaults to
  // midnight UTC of the day holding the earliest event.
  std::optional<Timestamp> origin;
  std::string source_label;
  // Worker threads for the per-period ranking pass. The result does not
  // depend on this value.
  unsigned threads = 1;
};

// Per period, items are ranked by summed weight, descending; ties go to the
// item whose first-ever event is earlier, then to the lexicographically
// smaller identifier. Empty periods between the first and last non-empty
// period are kept as empty snapshots. Throws ValidationError for events
// before the origin.
ChartSeries compile_charts(std::span<const EventRecord> events,
                           const CompileOptions& options);

// Merges consecutive groups of `factor` periods, aligned to the origin
// (group g holds period indices [g*factor, (g+1)*factor)). Per item, only
// the listed scores are summed, so items that fell below the input cut-off
// in some period lose those counts. Ties are broken by the best rank held
// within the group, then the earliest period at that rank, then identifier.
// For factor 1 this reproduces the input ordering exactly.
ChartSeries aggregate_series(const ChartSeries& series, int factor, int slots_out);

struct SeriesStats {
  std::size_t snapshot_count = 0;
  std::size_t entry_count = 0;
  std::size_t distinct_items = 0;
  double fill_ratio = 0;  // mean entries per snapshot / K

  nlohmann::json to_json() const;
};

SeriesStats series_stats(const ChartSeries& series);

}  // namespace chartdyn

#endif  // CHARTDYN_CHARTGEN_HPP_
