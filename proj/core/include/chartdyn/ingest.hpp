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

// Event and chart-table readers.
//
// Event files come in two pinned layouts:
//
//   CSV     item,ts,n            (header optional, n optional, default 1)
//   NDJSON  {"item":"postA","ts":1357000000,"n":3}
//
// Malformed lines are skipped and counted. A parse fails with FormatError
// only when the malformed fraction exceeds ParseOptions::max_skip_fraction.

#ifndef CHARTDYN_INGEST_HPP_
#define CHARTDYN_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdyn/series.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn {

enum class EventFormat { kNdjson, kCsv };

std::optional<EventFormat> parse_event_format(std::string_view name);
std::string_view event_format_name(EventFormat format);

// ".ndjson", ".jsonl" and ".json" (optionally followed by ".gz") select
// NDJSON; everything else is CSV.
EventFormat event_format_for_path(const std::filesystem::path& path);

struct EventRecord {
  std::string item;
  Timestamp ts = 0;
  std::int64_t weight = 1;

  bool operator==(const EventRecord&) const = default;
};

struct TimeWindow {
  std::optional<Timestamp> min_ts;  // inclusive
  std::optional<Timestamp> max_ts;  // inclusive

  bool contains(Timestamp ts) const {
    return (!min_ts || ts >= *min_ts) && (!max_ts || ts <= *max_ts);
  }
};

// records_read == accepted + records_skipped, where skipped covers both
// malformed lines and well-formed records outside the time window.
struct IngestReport {
  std::uint64_t records_read = 0;
  std::uint64_t records_skipped = 0;
  std::uint64_t records_malformed = 0;
  std::uint64_t records_out_of_window = 0;
  std::uint64_t items_dropped_by_filter = 0;
  std::uint64_t distinct_items = 0;

  std::uint64_t accepted() const { return records_read - records_skipped; }
  nlohmann::json to_json() const;
};

struct ParseOptions {
  EventFormat format = EventFormat::kCsv;
  TimeWindow window;
  double max_skip_fraction = 0.01;
};

struct ParsedEvents {
  std::vector<EventRecord> records;  // file order
  IngestReport report;
};

ParsedEvents parse_events(std::istream& in, const ParseOptions& options);

void write_events(std::ostream& out, std::span<const EventRecord> events,
                  EventFormat format);

// Keeps an item's events iff its summed weight over the whole input is at
// least min_total. Two passes; memory grows with the number of distinct
// items, not with the number of events. When `report` is given,
// items_dropped_by_filter and distinct_items are updated.
std::vector<EventRecord> filter_low_activity(std::span<const EventRecord> events,
                                             std::int64_t min_total,
                                             IngestReport* report = nullptr);

struct ChartTableOptions {
  int slots = 10;  // K
  // Period length; inferred from the spacing of period starts when unset
  // (one week for a single-period table).
  std::optional<std::int64_t> period_seconds;
  std::optional<Timestamp> origin;
  std::string source_label;
};

// Reads `period_start,rank,item[,score]` tables (period_start as epoch
// seconds or ISO-8601 date) as well as the five-column series CSV written by
// write_series_csv. Missing periods become empty snapshots.
ChartSeries parse_chart_table(std::istream& in, const ChartTableOptions& options);

}  // namespace chartdyn

#endif  // CHARTDYN_INGEST_HPP_
