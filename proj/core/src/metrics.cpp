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

#include "chartdyn/metrics.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "chartdyn/error.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn {

std::optional<CensorPolicy> parse_censor_policy(std::string_view name) {
  if (name == "drop_censored") return CensorPolicy::kDropCensored;
  if (name == "keep_all") return CensorPolicy::kKeepAll;
  return std::nullopt;
}

std::string_view censor_policy_name(CensorPolicy p) {
  return p == CensorPolicy::kDropCensored ? "drop_censored" : "keep_all";
}

std::optional<Counting> parse_counting(std::string_view name) {
  if (name == "total") return Counting::kTotal;
  if (name == "longest_run") return Counting::kLongestRun;
  return std::nullopt;
}

std::string_view counting_name(Counting c) {
  return c == Counting::kTotal ? "total" : "longest_run";
}

namespace {

struct Track {
  int first = 0;
  int last = 0;
  int first_rank = 0;
  int total = 0;
  int run = 0;
  int best_run = 0;
};

}  // namespace

std::vector<LifetimeSample> lifetimes(const ChartSeries& series, CensorPolicy censor,
                                      Counting counting) {
  std::unordered_map<std::string_view, Track> tracks;
  const int n = static_cast<int>(series.snapshots.size());
  for (int pos = 0; pos < n; ++pos) {
    for (const auto& e : series.snapshots[static_cast<std::size_t>(pos)].entries) {
      auto [it, inserted] = tracks.try_emplace(e.item);
      Track& t = it->second;
      if (inserted) {
        t.first = pos;
        t.first_rank = e.rank;
      }
      t.run = (!inserted && t.last == pos - 1) ? t.run + 1 : 1;
      t.best_run = std::max(t.best_run, t.run);
      t.last = pos;
      ++t.total;
    }
  }

  std::vector<std::pair<std::string_view, const Track*>> order;
  order.reserve(tracks.size());
  for (const auto& [item, t] : tracks) order.emplace_back(item, &t);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second->first != b.second->first) return a.second->first < b.second->first;
    return a.second->first_rank < b.second->first_rank;
  });

  std::vector<LifetimeSample> out;
  out.reserve(order.size());
  for (const auto& [item, t] : order) {
    LifetimeSample s;
    s.item = std::string(item);
    s.lifetime = counting == Counting::kTotal ? t->total : t->best_run;
    s.first_period = t->first;
    s.last_period = t->last;
    s.left_censored = t->first == 0;
    s.right_censored = t->last == n - 1;
    if (censor == CensorPolicy::kDropCensored && (s.left_censored || s.right_censored)) {
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> lifetime_values(std::span<const LifetimeSample> samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(static_cast<double>(s.lifetime));
  return v;
}

std::string lifetimes_tsv(std::span<const LifetimeSample> samples) {
  std::ostringstream out;
  out << "item\tL\tfirst\tlast\tlcens\trcens\n";
  for (const auto& s : samples) {
    out << s.item << '\t' << s.lifetime << '\t' << s.first_period << '\t'
        << s.last_period << '\t' << (s.left_censored ? 1 : 0) << '\t'
        << (s.right_censored ? 1 : 0) << '\n';
  }
  return out.str();
}

std::optional<Grouping> parse_grouping(std::string_view text) {
  if (text == "calendar_year") return Grouping::calendar_year();
  if (text == "whole_series") return Grouping::whole_series();
  constexpr std::string_view kPrefix = "fixed_window:";
  if (text.starts_with(kPrefix)) {
    auto n = parse_int64(text.substr(kPrefix.size()));
    if (n && *n >= 1) return Grouping::fixed_window(static_cast<std::size_t>(*n));
  }
  return std::nullopt;
}

std::string grouping_name(const Grouping& g) {
  switch (g.kind) {
    case Grouping::Kind::kCalendarYear: return "calendar_year";
    case Grouping::Kind::kWholeSeries: return "whole_series";
    case Grouping::Kind::kFixedWindow: return "fixed_window:" + std::to_string(g.window);
  }
  return "unknown";
}

std::vector<DiversityPoint> diversity(const ChartSeries& series,
                                      const Grouping& grouping) {
  if (grouping.kind == Grouping::Kind::kFixedWindow && grouping.window < 1) {
    throw ValidationError("fixed window needs at least one snapshot");
  }
  // Group key -> snapshot positions; std::map keeps years in order.
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  for (std::size_t pos = 0; pos < series.snapshots.size(); ++pos) {
    std::int64_t key = 0;
    switch (grouping.kind) {
      case Grouping::Kind::kCalendarYear:
        key = utc_year(series.snapshots[pos].period_start);
        break;
      case Grouping::Kind::kWholeSeries:
        key = 0;
        break;
      case Grouping::Kind::kFixedWindow:
        key = static_cast<std::int64_t>(pos / grouping.window * grouping.window);
        break;
    }
    groups[key].push_back(pos);
  }

  std::vector<DiversityPoint> out;
  for (const auto& [key, positions] : groups) {
    std::unordered_set<std::string_view> items;
    for (std::size_t pos : positions) {
      for (const auto& e : series.snapshots[pos].entries) items.insert(e.item);
    }
    DiversityPoint p;
    p.group = grouping.kind == Grouping::Kind::kWholeSeries ? "all" : std::to_string(key);
    p.unique_items = items.size();
    p.slots = static_cast<std::size_t>(series.slots) * positions.size();
    p.diversity = static_cast<double>(p.unique_items) / static_cast<double>(p.slots);
    out.push_back(std::move(p));
  }
  return out;
}

std::string diversity_tsv(std::span<const DiversityPoint> points) {
  std::ostringstream out;
  out << "group\tN_a\tN_s\td\n";
  for (const auto& p : points) {
    out << p.group << '\t' << p.unique_items << '\t' << p.slots << '\t'
        << format_double(p.diversity) << '\n';
  }
  return out.str();
}

double mean_lifetime(const ChartSeries& series) {
  const auto samples = lifetimes(series, CensorPolicy::kDropCensored, Counting::kTotal);
  if (samples.empty()) {
    throw UndefinedResultError("mean lifetime undefined: no uncensored items");
  }
  double sum = 0;
  for (const auto& s : samples) sum += s.lifetime;
  return sum / static_cast<double>(samples.size());
}

TopStats top_stats(const ChartSeries& series) {
  struct Entry {
    int first_listed = -1;
    int first_rank = 0;
    int first_top = -1;
  };
  std::unordered_map<std::string_view, Entry> seen;
  for (int pos = 0; pos < static_cast<int>(series.snapshots.size()); ++pos) {
    for (const auto& e : series.snapshots[static_cast<std::size_t>(pos)].entries) {
      Entry& s = seen[e.item];
      if (s.first_listed < 0) {
        s.first_listed = pos;
        s.first_rank = e.rank;
      }
      if (e.rank == 1 && s.first_top < 0) s.first_top = pos;
    }
  }

  TopStats stats;
  std::size_t debuts = 0;
  double wait = 0;
  for (const auto& [item, s] : seen) {
    if (s.first_top < 0) continue;
    ++stats.number_ones;
    if (s.first_rank == 1) ++debuts;
    wait += s.first_top - s.first_listed;
  }
  if (stats.number_ones == 0) {
    throw UndefinedResultError("no item ever reaches rank 1");
  }
  const auto n = static_cast<double>(stats.number_ones);
  stats.p_one = static_cast<double>(debuts) / n;
  stats.mean_time_to_top = wait / n;
  return stats;
}

std::vector<LocalMaximum> find_local_maxima(const BinnedDensity& density,
                                            double min_prominence) {
  std::vector<LocalMaximum> out;
  const auto& d = density.density;
  const std::size_t n = d.size();
  if (n < 3) return out;

  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && d[j + 1] == d[i]) ++j;  // plateau [i, j]
    if (j + 1 < n && d[i - 1] < d[i] && d[j + 1] < d[i]) {
      const double peak = d[i];
      double left_min = peak;
      for (std::size_t k = i; k-- > 0 && d[k] <= peak;) left_min = std::min(left_min, d[k]);
      double right_min = peak;
      for (std::size_t k = j + 1; k < n && d[k] <= peak; ++k) {
        right_min = std::min(right_min, d[k]);
      }
      const double prominence = (peak - std::max(left_min, right_min)) / peak;
      if (prominence > min_prominence) {
        out.push_back({i, density.centers[i], peak, prominence});
      }
    }
    i = j + 1;
  }
  return out;
}

}  // namespace chartdyn
