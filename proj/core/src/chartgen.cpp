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

#include "chartdyn/chartgen.hpp"

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chartdyn/error.hpp"

namespace chartdyn {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Tally {
  std::int64_t period;
  std::uint32_t item;
  std::int64_t weight;
};

struct Scored {
  std::uint32_t item;
  std::int64_t score;
};

}  // namespace

ChartSeries compile_charts(std::span<const EventRecord> events,
                           const CompileOptions& options) {
  if (options.period_seconds < 1) throw ValidationError("period_seconds must be >= 1");
  if (options.slots < 1) throw ValidationError("slots must be >= 1");

  ChartSeries series;
  series.period_seconds = options.period_seconds;
  series.slots = options.slots;
  series.source_label = options.source_label;
  if (events.empty()) {
    series.origin = options.origin.value_or(0);
    return series;
  }

  Timestamp min_ts = events.front().ts;
  for (const auto& e : events) min_ts = std::min(min_ts, e.ts);
  series.origin = options.origin.value_or(utc_midnight(min_ts));
  if (min_ts < series.origin) {
    throw ValidationError("event at " + std::to_string(min_ts) +
                          " precedes the chart origin " +
                          std::to_string(series.origin));
  }

  // Intern identifiers; remember each item's first-ever event time.
  std::unordered_map<std::string_view, std::uint32_t> ids;
  std::vector<std::string_view> names;
  std::vector<Timestamp> first_seen;
  std::vector<Tally> tallies;
  tallies.reserve(events.size());
  for (const auto& e : events) {
    auto [it, inserted] =
        ids.try_emplace(e.item, static_cast<std::uint32_t>(names.size()));
    if (inserted) {
      names.push_back(e.item);
      first_seen.push_back(e.ts);
    } else {
      first_seen[it->second] = std::min(first_seen[it->second], e.ts);
    }
    tallies.push_back({(e.ts - series.origin) / options.period_seconds, it->second,
                       e.weight});
  }

  std::sort(tallies.begin(), tallies.end(), [](const Tally& a, const Tally& b) {
    return a.period != b.period ? a.period < b.period : a.item < b.item;
  });

  // Per-period score lists, item order ascending.
  const std::int64_t first_period = tallies.front().period;
  const std::int64_t last_period = tallies.back().period;
  const auto n_periods = static_cast<std::size_t>(last_period - first_period + 1);
  std::vector<std::vector<Scored>> scored(n_periods);
  for (std::size_t i = 0; i < tallies.size();) {
    const auto& t = tallies[i];
    std::int64_t sum = 0;
    std::size_t j = i;
    for (; j < tallies.size() && tallies[j].period == t.period &&
           tallies[j].item == t.item;
         ++j) {
      sum += tallies[j].weight;
    }
    scored[static_cast<std::size_t>(t.period - first_period)].push_back({t.item, sum});
    i = j;
  }

  auto better = [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (first_seen[a.item] != first_seen[b.item]) {
      return first_seen[a.item] < first_seen[b.item];
    }
    return names[a.item] < names[b.item];
  };

  series.snapshots.resize(n_periods);
  auto rank_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      auto& list = scored[p];
      const std::size_t k = std::min(list.size(), static_cast<std::size_t>(options.slots));
      std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(k),
                        list.end(), better);
      ChartSnapshot& snap = series.snapshots[p];
      snap.period_index = first_period + static_cast<std::int64_t>(p);
      snap.period_start = series.origin + snap.period_index * options.period_seconds;
      snap.period_end = snap.period_start + options.period_seconds;
      snap.entries.reserve(k);
      for (std::size_t r = 0; r < k; ++r) {
        snap.entries.push_back({static_cast<int>(r) + 1, std::string(names[list[r].item]),
                                static_cast<double>(list[r].score)});
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(n_periods, 1));
  if (workers == 1) {
    rank_range(0, n_periods);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_periods + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n_periods, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(rank_range, begin, end);
    }
  }
  return series;
}

ChartSeries aggregate_series(const ChartSeries& series, int factor, int slots_out) {
  if (factor < 1) throw ValidationError("aggregation factor must be >= 1");
  if (slots_out < 1) throw ValidationError("slots must be >= 1");
  for (const auto& snap : series.snapshots) {
    for (const auto& e : snap.entries) {
      if (!e.score) {
        throw ValidationError("aggregation needs scores; period " +
                              std::to_string(snap.period_index) + " has none for " +
                              e.item);
      }
    }
  }

  ChartSeries out;
  out.period_seconds = series.period_seconds * factor;
  out.slots = slots_out;
  out.origin = series.origin;
  out.source_label = series.source_label;
  if (series.empty()) return out;

  struct Acc {
    double score = 0;
    int best_rank = 0;
    std::int64_t best_rank_period = 0;
  };

  const std::int64_t g_first = floor_div(series.snapshots.front().period_index, factor);
  const std::int64_t g_last = floor_div(series.snapshots.back().period_index, factor);
  std::size_t pos = 0;
  for (std::int64_t g = g_first; g <= g_last; ++g) {
    std::unordered_map<std::string_view, Acc> acc;
    for (; pos < series.snapshots.size() &&
           floor_div(series.snapshots[pos].period_index, factor) == g;
         ++pos) {
      const auto& snap = series.snapshots[pos];
      for (const auto& e : snap.entries) {
        auto [it, inserted] = acc.try_emplace(e.item);
        Acc& a = it->second;
        a.score += *e.score;
        if (inserted || e.rank < a.best_rank) {
          a.best_rank = e.rank;
          a.best_rank_period = snap.period_index;
        }
      }
    }

    std::vector<std::pair<std::string_view, Acc>> ranked(acc.begin(), acc.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      const Acc& a = x.second;
      const Acc& b = y.second;
      if (a.score != b.score) return a.score > b.score;
      if (a.best_rank != b.best_rank) return a.best_rank < b.best_rank;
      if (a.best_rank_period != b.best_rank_period) {
        return a.best_rank_period < b.best_rank_period;
      }
      return x.first < y.first;
    });
    if (ranked.size() > static_cast<std::size_t>(slots_out)) {
      ranked.resize(static_cast<std::size_t>(slots_out));
    }

    ChartSnapshot snap;
    snap.period_index = g;
    snap.period_start = out.origin + g * out.period_seconds;
    snap.period_end = snap.period_start + out.period_seconds;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      snap.entries.push_back(
          {static_cast<int>(r) + 1, std::string(ranked[r].first), ranked[r].second.score});
    }
    out.snapshots.push_back(std::move(snap));
  }
  return out;
}

nlohmann::json SeriesStats::to_json() const {
  return {{"snapshot_count", snapshot_count},
          {"entry_count", entry_count},
          {"distinct_items", distinct_items},
          {"fill_ratio", fill_ratio}};
}

SeriesStats series_stats(const ChartSeries& series) {
  SeriesStats stats;
  stats.snapshot_count = series.snapshots.size();
  std::unordered_set<std::string_view> items;
  for (const auto& snap : series.snapshots) {
    stats.entry_count += snap.entries.size();
    for (const auto& e : snap.entries) items.insert(e.item);
  }
  stats.distinct_items = items.size();
  if (stats.snapshot_count > 0 && series.slots > 0) {
    stats.fill_ratio = static_cast<double>(stats.entry_count) /
                       static_cast<double>(stats.snapshot_count) /
                       static_cast<double>(series.slots);
  }
  return stats;
}

}  // namespace chartdyn
