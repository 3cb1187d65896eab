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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "chartdyn/chartgen.hpp"
#include "chartdyn/error.hpp"
#include "support/oracles.hpp"

namespace chartdyn {
namespace {

// Builds a series from per-snapshot item lists (rank = position + 1).
ChartSeries make_series(const std::vector<std::vector<std::string>>& charts, int k,
                        std::int64_t period = 604800, Timestamp origin = 0) {
  ChartSeries s;
  s.period_seconds = period;
  s.slots = k;
  s.origin = origin;
  for (std::size_t p = 0; p < charts.size(); ++p) {
    const auto idx = static_cast<std::int64_t>(p);
    ChartSnapshot snap{idx, origin + idx * period, origin + (idx + 1) * period, {}};
    for (std::size_t r = 0; r < charts[p].size(); ++r) {
      snap.entries.push_back({static_cast<int>(r) + 1, charts[p][r],
                              static_cast<double>(100 - r)});
    }
    s.snapshots.push_back(std::move(snap));
  }
  return s;
}

TEST(Lifetimes, InteriorSingleton) {
  const auto s = make_series({{"edge"}, {"x", "edge"}, {"edge"}}, 2);
  const auto v = lifetimes(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].item, "x");
  EXPECT_EQ(v[0].lifetime, 1);
  EXPECT_FALSE(v[0].left_censored || v[0].right_censored);
}

TEST(Lifetimes, FullSpanIsCensoredAndDropped) {
  const auto s = make_series({{"all"}, {"all"}, {"all"}}, 1);
  EXPECT_TRUE(lifetimes(s).empty());
  const auto kept = lifetimes(s, CensorPolicy::kKeepAll);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_TRUE(kept[0].left_censored);
  EXPECT_TRUE(kept[0].right_censored);
  EXPECT_EQ(kept[0].lifetime, 3);
}

TEST(Lifetimes, TotalVersusLongestRun) {
  std::vector<std::vector<std::string>> charts(10);
  for (int p : {2, 3, 5}) charts[static_cast<std::size_t>(p)] = {"t"};
  const auto s = make_series(charts, 1);
  const auto total = lifetimes(s, CensorPolicy::kDropCensored, Counting::kTotal);
  const auto run = lifetimes(s, CensorPolicy::kDropCensored, Counting::kLongestRun);
  ASSERT_EQ(total.size(), 1u);
  EXPECT_EQ(total[0].lifetime, 3);
  EXPECT_EQ(run[0].lifetime, 2);
  EXPECT_EQ(total[0].first_period, 2);
  EXPECT_EQ(total[0].last_period, 5);
}

TEST(Lifetimes, PropertiesOnRandomSeries) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 30; ++rep) {
    const auto events = testing::random_events(rng, {2000, 40, 40, 3600, 3});
    CompileOptions o;
    o.period_seconds = 3600;
    o.slots = 5;
    const auto s = compile_charts(events, o);
    const auto total = lifetimes(s, CensorPolicy::kKeepAll, Counting::kTotal);
    const auto run = lifetimes(s, CensorPolicy::kKeepAll, Counting::kLongestRun);
    std::size_t entries = 0;
    for (const auto& snap : s.snapshots) entries += snap.entries.size();
    std::size_t sum = 0;
    const int last = static_cast<int>(s.snapshots.size()) - 1;
    for (std::size_t i = 0; i < total.size(); ++i) {
      const auto& t = total[i];
      sum += static_cast<std::size_t>(t.lifetime);
      EXPECT_GE(t.lifetime, 1);
      EXPECT_LE(t.lifetime, t.last_period - t.first_period + 1);
      EXPECT_EQ(t.left_censored, t.first_period == 0);
      EXPECT_EQ(t.right_censored, t.last_period == last);
      ASSERT_EQ(run[i].item, t.item);
      EXPECT_LE(run[i].lifetime, t.lifetime);
    }
    EXPECT_EQ(sum, entries);
  }
}

TEST(Lifetimes, TsvColumns) {
  const auto s = make_series({{"a"}, {"b"}, {"c"}}, 1);
  const auto tsv = lifetimes_tsv(lifetimes(s, CensorPolicy::kKeepAll));
  EXPECT_EQ(tsv, "item\tL\tfirst\tlast\tlcens\trcens\na\t1\t0\t0\t1\t0\n"
                 "b\t1\t1\t1\t0\t0\nc\t1\t2\t2\t0\t1\n");
}

TEST(Diversity, IdenticalSnapshots) {
  const std::vector<std::string> chart = {"a", "b", "c", "d"};
  const auto s = make_series({chart, chart, chart, chart, chart}, 4);
  const auto d = diversity(s, Grouping::whole_series());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].unique_items, 4u);
  EXPECT_EQ(d[0].slots, 20u);
  EXPECT_DOUBLE_EQ(d[0].diversity, 0.2);
  EXPECT_EQ(d[0].group, "all");
}

TEST(Diversity, AllDistinctIsOne) {
  const auto s = make_series({{"a", "b"}, {"c", "d"}, {"e", "f"}}, 2);
  EXPECT_DOUBLE_EQ(diversity(s, Grouping::whole_series())[0].diversity, 1.0);
}

TEST(Diversity, CalendarYearUsesPeriodStartYear) {
  // Weekly charts starting 2012-12-23: two in 2012, three in 2013.
  const auto s = make_series({{"a"}, {"a"}, {"a"}, {"b"}, {"b"}}, 1, 604800, 1356220800);
  const auto d = diversity(s, Grouping::calendar_year());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].group, "2012");
  EXPECT_EQ(d[0].slots, 2u);
  EXPECT_DOUBLE_EQ(d[0].diversity, 0.5);
  EXPECT_EQ(d[1].group, "2013");
  EXPECT_EQ(d[1].unique_items, 2u);
}

TEST(Diversity, FixedWindowsAndRelabeling) {
  const auto s = make_series({{"a", "b"}, {"a", "c"}, {"d", "b"}, {"d", "e"}, {"f", "a"}}, 2);
  const auto d = diversity(s, Grouping::fixed_window(2));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1].group, "2");
  EXPECT_DOUBLE_EQ(d[0].diversity, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(d[2].diversity, 1.0);

  auto renamed = s;
  for (auto& snap : renamed.snapshots) {
    for (auto& e : snap.entries) e.item = "zz_" + e.item + "_" + e.item;
  }
  const auto d2 = diversity(renamed, Grouping::fixed_window(2));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i].diversity, d2[i].diversity);
}

TEST(Grouping, ParseNames) {
  EXPECT_EQ(parse_grouping("fixed_window:4")->window, 4u);
  EXPECT_FALSE(parse_grouping("fixed_window:0"));
  EXPECT_FALSE(parse_grouping("decade"));
  EXPECT_EQ(grouping_name(*parse_grouping("fixed_window:7")), "fixed_window:7");
}

TEST(MeanLifetime, DegenerateIsUndefined) {
  EXPECT_THROW(mean_lifetime(make_series({{"a"}}, 1)), UndefinedResultError);
}

TEST(MeanLifetime, TwoAndFour) {
  const auto s = make_series({{"e"}, {"x", "y"}, {"x", "y"}, {"y"}, {"y"}, {"e"}}, 2);
  EXPECT_DOUBLE_EQ(mean_lifetime(s), 3.0);
}

TEST(TopStats, AllDebutAtTop) {
  const auto s = make_series({{"a", "z"}, {"b", "a"}, {"c", "b"}}, 2);
  const auto t = top_stats(s);
  EXPECT_EQ(t.number_ones, 3u);
  EXPECT_EQ(t.p_one, 1.0);
  EXPECT_EQ(t.mean_time_to_top, 0.0);
}

TEST(TopStats, NineteenOfTwenty) {
  std::vector<std::vector<std::string>> charts;
  charts.push_back({"slow0", "slow"});
  charts.push_back({"slow", "x"});
  for (int i = 0; i < 18; ++i) charts.push_back({"n" + std::to_string(i), "x"});
  const auto t = top_stats(make_series(charts, 2));
  EXPECT_EQ(t.number_ones, 20u);
  EXPECT_DOUBLE_EQ(t.p_one, 0.95);
  EXPECT_DOUBLE_EQ(t.mean_time_to_top, 1.0 / 20.0);
}

TEST(TopStats, ClimbFromFive) {
  std::vector<std::vector<std::string>> charts = {
      {"a", "b", "c", "d", "climber"}, {"a", "b", "climber", "c", "d"},
      {"a", "climber", "b", "c", "d"}, {"a", "climber", "b", "c", "d"},
      {"climber", "a", "b", "c", "d"}};
  const auto t = top_stats(make_series(charts, 5));
  EXPECT_EQ(t.number_ones, 2u);
  EXPECT_DOUBLE_EQ(t.mean_time_to_top, 2.0);  // (0 + 4) / 2
  EXPECT_DOUBLE_EQ(t.p_one, 0.5);
}

TEST(TopStats, NoNumberOneIsUndefined) {
  ChartSeries s = make_series({{"a"}}, 3);
  s.snapshots[0].entries.clear();
  EXPECT_THROW(top_stats(s), UndefinedResultError);
}

TEST(TopStats, InvariantUnderMonotoneScoreTransform) {
  std::mt19937_64 rng(13);
  const auto events = testing::random_events(rng, {3000, 30, 50, 3600, 5});
  CompileOptions o;
  o.slots = 5;
  const auto s = compile_charts(events, o);
  auto t = s;
  for (auto& snap : t.snapshots) {
    for (auto& e : snap.entries) e.score = std::sqrt(*e.score) + 3;
  }
  const auto a = top_stats(s);
  const auto b = top_stats(t);
  EXPECT_EQ(a.p_one, b.p_one);
  EXPECT_EQ(a.mean_time_to_top, b.mean_time_to_top);
}

BinnedDensity density_of(const std::vector<double>& values) {
  BinnedDensity d;
  for (std::size_t i = 0; i <= values.size(); ++i) d.edges.push_back(static_cast<double>(i) + 0.5);
  for (std::size_t i = 0; i < values.size(); ++i) {
    d.centers.push_back(std::sqrt(d.edges[i] * d.edges[i + 1]));
    d.counts.push_back(1);
  }
  d.density = values;
  d.total = values.size();
  return d;
}

TEST(LocalMaxima, MonotoneHasNone) {
  EXPECT_TRUE(find_local_maxima(density_of({5, 4, 3, 2, 1}), 0.0).empty());
  EXPECT_TRUE(find_local_maxima(density_of({1, 2}), 0.0).empty());
}

TEST(LocalMaxima, PlateauReportsFirstBin) {
  const auto m = find_local_maxima(density_of({1, 3, 3, 1}), 0.0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].bin, 1u);
  EXPECT_DOUBLE_EQ(m[0].prominence, 2.0 / 3.0);
}

TEST(LocalMaxima, ProminenceUsesHigherFlankingMinimum) {
  // Peak 4 at bin 3: left min 1, right dips to 2 before rising to 5.
  const auto m = find_local_maxima(density_of({3, 1, 2, 4, 2, 5, 1}), 0.0);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].bin, 3u);
  EXPECT_DOUBLE_EQ(m[0].prominence, 0.5);
  EXPECT_EQ(find_local_maxima(density_of({3, 1, 2, 4, 2, 5, 1}), 0.6).size(), 1u);
}

TEST(LocalMaxima, BumpOverPowerLaw) {
  // Hourly-like bins 1..60 with a bump centred at 24 over L^-1.5.
  std::vector<double> values;
  for (int l = 1; l <= 60; ++l) {
    const double x = l;
    values.push_back(std::pow(x, -1.5) + 0.02 * std::exp(-0.5 * std::pow((x - 24) / 2.0, 2)));
  }
  const auto d = density_of(values);
  const auto m = find_local_maxima(d, 0.05);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_LE(d.edges[m[0].bin], 24.0);
  EXPECT_GT(d.edges[m[0].bin + 1], 24.0);
}

}  // namespace
}  // namespace chartdyn
