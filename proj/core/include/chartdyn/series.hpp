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

// Ranked top-K chart snapshots and their on-disk form.
//
// A series is written as two files: a CSV body with one row per chart entry
//
//   period_index,period_start,rank,item,score
//
// and a JSON sidecar (same stem, ".json") carrying period_seconds, K, origin,
// source_label and the snapshot span, so that empty snapshots survive a
// round trip.

#ifndef CHARTDYN_SERIES_HPP_
#define CHARTDYN_SERIES_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdyn/text.hpp"

namespace chartdyn {

struct ChartEntry {
  int rank = 0;  // 1-based
  std::string item;
  std::optional<double> score;  // summed weight in the period

  bool operator==(const ChartEntry&) const = default;
};

struct ChartSnapshot {
  std::int64_t period_index = 0;
  Timestamp period_start = 0;
  Timestamp period_end = 0;  // exclusive
  std::vector<ChartEntry> entries;

  bool operator==(const ChartSnapshot&) const = default;
};

// Snapshots are contiguous in period_index; periods without entries are
// stored as empty snapshots.
struct ChartSeries {
  std::int64_t period_seconds = 1;
  int slots = 1;  // K
  Timestamp origin = 0;
  std::vector<ChartSnapshot> snapshots;
  std::string source_label;

  bool operator==(const ChartSeries&) const = default;

  bool empty() const { return snapshots.empty(); }
};

// Throws ValidationError when ranks are not 1..k with k <= K, periods are not
// contiguous, or period bounds disagree with period_seconds.
void validate_series(const ChartSeries& series);

void write_series_csv(std::ostream& out, const ChartSeries& series);

nlohmann::json series_sidecar(const ChartSeries& series);

// Writes `<stem>.csv` and `<stem>.json`. `extra` is merged into the sidecar
// (the CLI stores its run configuration there).
void save_series(const std::filesystem::path& csv_path, const ChartSeries& series,
                 const nlohmann::json& extra = nlohmann::json::object());

// Reads a series CSV and, if present, its JSON sidecar. Without a sidecar
// the file is treated as a plain chart table with `slots` ranks.
ChartSeries load_series(const std::filesystem::path& csv_path, int slots = 0);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace chartdyn

#endif  // CHARTDYN_SERIES_HPP_
