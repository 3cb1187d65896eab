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

// Chart statistics: on-chart lifetimes, diversity, number-one dynamics and
// peak detection in lifetime densities.
//
// Periods are counted by snapshot position within the series, so position 0
// is the first snapshot and position n-1 the last.

#ifndef CHARTDYN_METRICS_HPP_
#define CHARTDYN_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdyn/series.hpp"
#include "chartdyn/statfit.hpp"

namespace chartdyn {

enum class CensorPolicy { kDropCensored, kKeepAll };
enum class Counting { kTotal, kLongestRun };

std::optional<CensorPolicy> parse_censor_policy(std::string_view name);
std::string_view censor_policy_name(CensorPolicy p);
std::optional<Counting> parse_counting(std::string_view name);
std::string_view counting_name(Counting c);

struct LifetimeSample {
  std::string item;
  int lifetime = 0;       // snapshots listed (or longest streak)
  int first_period = 0;   // snapshot position of first listing
  int last_period = 0;    // snapshot position of last listing
  bool left_censored = false;   // listed in the first snapshot
  bool right_censored = false;  // listed in the last snapshot
};

// Samples come out in order of first listing, then rank at first listing.
std::vector<LifetimeSample> lifetimes(const ChartSeries& series,
                                      CensorPolicy censor = CensorPolicy::kDropCensored,
                                      Counting counting = Counting::kTotal);

std::vector<double> lifetime_values(std::span<const LifetimeSample> samples);

// Header item, L, first, last, lcens, rcens.
std::string lifetimes_tsv(std::span<const LifetimeSample> samples);

struct Grouping {
  enum class Kind { kCalendarYear, kWholeSeries, kFixedWindow };
  Kind kind = Kind::kCalendarYear;
  std::size_t window = 0;  // snapshots per group for kFixedWindow

  static Grouping calendar_year() { return {Kind::kCalendarYear, 0}; }
  static Grouping whole_series() { return {Kind::kWholeSeries, 0}; }
  static Grouping fixed_window(std::size_t n) { return {Kind::kFixedWindow, n}; }
};

// "calendar_year", "whole_series", "fixed_window:<n>".
std::optional<Grouping> parse_grouping(std::string_view text);
std::string grouping_name(const Grouping& g);

struct DiversityPoint {
  std::string group;
  std::size_t unique_items = 0;  // N_a
  std::size_t slots = 0;         // N_s = K * snapshots in group
  double diversity = 0;          // N_a / N_s
};

// Calendar years use the UTC year of period_start. Fixed windows are
// labelled by the snapshot position they start at.
std::vector<DiversityPoint> diversity(const ChartSeries& series, const Grouping& grouping);

// Header group, N_a, N_s, d.
std::string diversity_tsv(std::span<const DiversityPoint> points);

// Mean total lifetime over uncensored items; UndefinedResultError if none.
double mean_lifetime(const ChartSeries& series);

struct TopStats {
  double p_one = 0;  // share of number-ones that debuted at rank 1
  std::size_t number_ones = 0;
  double mean_time_to_top = 0;  // periods from first listing to first rank 1
};

// UndefinedResultError when no item ever reaches rank 1.
TopStats top_stats(const ChartSeries& series);

struct LocalMaximum {
  std::size_t bin = 0;
  double location = 0;  // bin center
  double density = 0;
  double prominence = 0;  // (peak - higher flanking minimum) / peak
};

// Interior peaks of a binned density. A plateau of equal bins counts once,
// at its first bin. A peak's flanking minimum on each side is the lowest bin
// before the density rises above the peak again (or the series ends); the
// higher of the two is the base. Peaks with relative prominence above
// min_prominence are returned.
std::vector<LocalMaximum> find_local_maxima(const BinnedDensity& density,
                                            double min_prominence);

}  // namespace chartdyn

#endif  // CHARTDYN_METRICS_HPP_
