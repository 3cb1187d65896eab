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

#include <ostream>
#include <sstream>

#include "chartdyn/error.hpp"
#include "chartdyn/ingest.hpp"
#include "chartdyn/series.hpp"

namespace chartdyn {

void validate_series(const ChartSeries& series) {
  if (series.period_seconds < 1) throw ValidationError("period_seconds must be >= 1");
  if (series.slots < 1) throw ValidationError("slots must be >= 1");
  for (std::size_t i = 0; i < series.snapshots.size(); ++i) {
    const auto& s = series.snapshots[i];
    if (i > 0 && s.period_index != series.snapshots[i - 1].period_index + 1) {
      throw ValidationError("snapshots are not contiguous at position " +
                            std::to_string(i));
    }
    if (s.period_end - s.period_start != series.period_seconds) {
      throw ValidationError("snapshot period length disagrees with period_seconds");
    }
    if (s.entries.size() > static_cast<std::size_t>(series.slots)) {
      throw ValidationError("snapshot holds more than K entries");
    }
    for (std::size_t r = 0; r < s.entries.size(); ++r) {
      if (s.entries[r].rank != static_cast<int>(r) + 1) {
        throw ValidationError("ranks are not contiguous from 1");
      }
    }
  }
}

void write_series_csv(std::ostream& out, const ChartSeries& series) {
  out << "period_index,period_start,rank,item,score\n";
  for (const auto& snap : series.snapshots) {
    for (const auto& e : snap.entries) {
      out << snap.period_index << ',' << snap.period_start << ',' << e.rank << ','
          << csv_field(e.item) << ',';
      if (e.score) out << format_double(*e.score);
      out << '\n';
    }
  }
}

nlohmann::json series_sidecar(const ChartSeries& series) {
  std::size_t entries = 0;
  for (const auto& s : series.snapshots) entries += s.entries.size();
  nlohmann::json j = {
      {"format", "chartdyn-series"},
      {"period_seconds", series.period_seconds},
      {"K", series.slots},
      {"origin", series.origin},
      {"source_label", series.source_label},
      {"snapshot_count", series.snapshots.size()},
      {"entry_count", entries},
  };
  j["first_period_index"] = series.empty()
                                ? nlohmann::json(nullptr)
                                : nlohmann::json(series.snapshots.front().period_index);
  return j;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save_series(const std::filesystem::path& csv_path, const ChartSeries& series,
                 const nlohmann::json& extra) {
  std::ostringstream body;
  write_series_csv(body, series);
  write_file(csv_path, body.str());

  nlohmann::json side = series_sidecar(series);
  for (const auto& [key, value] : extra.items()) side[key] = value;
  write_file(sidecar_path(csv_path), side.dump(2) + "\n");
}

ChartSeries load_series(const std::filesystem::path& csv_path, int slots) {
  ChartTableOptions options;
  options.slots = slots;
  std::optional<std::int64_t> first_index;
  std::size_t snapshot_count = 0;

  const auto side_path = sidecar_path(csv_path);
  const bool has_sidecar =
      side_path != csv_path && std::filesystem::exists(side_path);
  if (has_sidecar) {
    auto side = nlohmann::json::parse(read_file(side_path), nullptr, false);
    if (side.is_discarded() || !side.is_object()) {
      throw FormatError("malformed series sidecar " + side_path.string());
    }
    try {
      options.slots = side.at("K").get<int>();
      options.period_seconds = side.at("period_seconds").get<std::int64_t>();
      options.origin = side.at("origin").get<Timestamp>();
      options.source_label = side.value("source_label", std::string());
      if (auto it = side.find("first_period_index");
          it != side.end() && !it->is_null()) {
        first_index = it->get<std::int64_t>();
      }
      snapshot_count = side.value("snapshot_count", std::size_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("series sidecar " + side_path.string() + ": " + e.what());
    }
  } else if (slots < 1) {
    throw ValidationError("chart table " + csv_path.string() +
                          " has no sidecar; the number of slots must be given");
  } else {
    options.source_label = csv_path.stem().string();
  }

  auto in = open_input(csv_path);
  ChartSeries series = parse_chart_table(*in, options);

  // Restore leading/trailing empty snapshots recorded in the sidecar.
  if (first_index && snapshot_count > 0) {
    const std::int64_t want_first = *first_index;
    const std::int64_t want_last =
        want_first + static_cast<std::int64_t>(snapshot_count) - 1;
    auto make_empty = [&](std::int64_t idx) {
      ChartSnapshot s;
      s.period_index = idx;
      s.period_start = series.origin + idx * series.period_seconds;
      s.period_end = s.period_start + series.period_seconds;
      return s;
    };
    std::vector<ChartSnapshot> snaps;
    const std::int64_t have_first =
        series.empty() ? want_last + 1 : series.snapshots.front().period_index;
    const std::int64_t have_last =
        series.empty() ? want_last : series.snapshots.back().period_index;
    if (have_first < want_first || have_last > want_last) {
      throw ValidationError("series rows fall outside the span in the sidecar");
    }
    for (std::int64_t i = want_first; i < have_first; ++i) {
      snaps.push_back(make_empty(i));
    }
    for (auto& s : series.snapshots) snaps.push_back(std::move(s));
    for (std::int64_t i = have_last + 1; i <= want_last; ++i) {
      snaps.push_back(make_empty(i));
    }
    series.snapshots = std::move(snaps);
  }
  return series;
}

}  // namespace chartdyn
