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

#include "chartdyn/ingest.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "chartdyn/error.hpp"
#include "chartdyn/metrics.hpp"
#include "support/oracles.hpp"

namespace chartdyn {
namespace {

ParsedEvents parse(const std::string& text, EventFormat format = EventFormat::kCsv,
                   double threshold = 0.01, TimeWindow window = {}) {
  std::istringstream in(text);
  ParseOptions options;
  options.format = format;
  options.max_skip_fraction = threshold;
  options.window = window;
  return parse_events(in, options);
}

TEST(ParseEvents, EmptyInput) {
  const auto parsed = parse("");
  EXPECT_TRUE(parsed.records.empty());
  EXPECT_EQ(parsed.report.records_read, 0u);
}

TEST(ParseEvents, SingleCsvLine) {
  const auto parsed = parse("postA,1357000000,1\n");
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.records[0], (EventRecord{"postA", 1357000000, 1}));
}

TEST(ParseEvents, HeaderOnlyOnFirstLineAndWeightDefaults) {
  const auto parsed = parse("item,ts,n\r\nx,5\ny,6,3\n", EventFormat::kCsv, 0.5);
  ASSERT_EQ(parsed.records.size(), 2u);
  EXPECT_EQ(parsed.records[0].weight, 1);
  EXPECT_EQ(parsed.records[1].weight, 3);
  // A header-looking line later in the file is a malformed record.
  const auto later = parse("x,5\nitem,ts,n\n", EventFormat::kCsv, 0.9);
  EXPECT_EQ(later.report.records_malformed, 1u);
}

// Ten data lines, two of them malformed (bad ts, zero weight).
constexpr const char* kTenLines =
    "a,100,1\nb,101,2\nc,oops,1\nd,103,1\ne,104,1\n"
    "f,105,0\ng,106,1\nh,107,1\ni,108,1\nj,109,1\n";

TEST(ParseEvents, MalformedLinesSkippedUnderThreshold) {
  const auto parsed = parse(kTenLines, EventFormat::kCsv, 0.25);
  EXPECT_EQ(parsed.records.size(), 8u);
  EXPECT_EQ(parsed.report.records_skipped, 2u);
  EXPECT_EQ(parsed.report.records_malformed, 2u);
  EXPECT_EQ(parsed.report.records_read,
            parsed.report.accepted() + parsed.report.records_skipped);
  // Emission follows file order.
  EXPECT_EQ(parsed.records[2].item, "d");
}

TEST(ParseEvents, MalformedAboveThresholdIsFormatError) {
  EXPECT_THROW(parse(kTenLines, EventFormat::kCsv, 0.1), FormatError);
}

TEST(ParseEvents, WindowSkipsWithoutCountingAsMalformed) {
  TimeWindow w{102, 105};
  const auto parsed = parse(kTenLines, EventFormat::kCsv, 0.25, w);
  EXPECT_EQ(parsed.records.size(), 2u);  // d, e
  EXPECT_EQ(parsed.report.records_out_of_window, 6u);
  EXPECT_EQ(parsed.report.records_malformed, 2u);
}

TEST(ParseEvents, Ndjson) {
  const auto parsed = parse(
      "{\"item\":\"p1\",\"ts\":1357000000,\"n\":3}\n"
      "{\"item\":\"p2\",\"ts\":1357000001}\n"
      "{\"item\":7,\"ts\":1}\n"
      "{\"item\":\"p3\",\"ts\":1.5}\n",
      EventFormat::kNdjson, 0.6);
  ASSERT_EQ(parsed.records.size(), 2u);
  EXPECT_EQ(parsed.records[0].weight, 3);
  EXPECT_EQ(parsed.records[1].weight, 1);
  EXPECT_EQ(parsed.report.records_malformed, 2u);
}

TEST(ParseEvents, RoundTripThroughWriter) {
  std::mt19937_64 rng(11);
  auto events = testing::random_events(rng, {500, 20, 10, 3600, 9});
  events.push_back({"needs,\"quoting\"", 1'700'000'000, 2});
  for (auto format : {EventFormat::kCsv, EventFormat::kNdjson}) {
    std::ostringstream out;
    write_events(out, events, format);
    EXPECT_EQ(parse(out.str(), format).records, events);
  }
}

TEST(EventFormat, DetectedFromExtension) {
  EXPECT_EQ(event_format_for_path("a.ndjson.gz"), EventFormat::kNdjson);
  EXPECT_EQ(event_format_for_path("a.jsonl"), EventFormat::kNdjson);
  EXPECT_EQ(event_format_for_path("a.csv.gz"), EventFormat::kCsv);
  EXPECT_EQ(parse_event_format("jsonl"), EventFormat::kNdjson);
  EXPECT_FALSE(parse_event_format("xml"));
}

TEST(FilterLowActivity, ThresholdOneIsIdentity) {
  std::mt19937_64 rng(5);
  const auto events = testing::random_events(rng, {300, 20, 10, 3600, 3});
  EXPECT_EQ(filter_low_activity(events, 1), events);
}

TEST(FilterLowActivity, ThousandCommentCut) {
  std::vector<EventRecord> events;
  for (int i = 0; i < 999; ++i) events.push_back({"A", i, 1});
  for (int i = 0; i < 1000; ++i) events.push_back({"B", i, 1});
  IngestReport report;
  const auto kept = filter_low_activity(events, 1000, &report);
  ASSERT_EQ(kept.size(), 1000u);
  for (const auto& e : kept) EXPECT_EQ(e.item, "B");
  EXPECT_EQ(report.items_dropped_by_filter, 1u);
  EXPECT_EQ(report.distinct_items, 1u);
}

TEST(FilterLowActivity, SumsWeightsNotLines) {
  const std::vector<EventRecord> events = {{"A", 1, 600}, {"A", 2, 400}, {"B", 1, 999}};
  const auto kept = filter_low_activity(events, 1000);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].item, "A");
}

TEST(FilterLowActivity, MatchesGroupSumOracle) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const auto events = testing::random_events(rng, {400, 20, 5, 3600, 5});
    for (std::int64_t t : {1, 10, 30, 60}) {
      EXPECT_EQ(filter_low_activity(events, t), testing::naive_filter(events, t));
    }
  }
}

TEST(FilterLowActivity, IdempotentAndMonotone) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const auto events = testing::random_events(rng, {400, 20, 5, 3600, 5});
    const auto once = filter_low_activity(events, 25);
    EXPECT_EQ(filter_low_activity(once, 25), once);
    std::set<std::string> loose;
    for (const auto& e : filter_low_activity(events, 10)) loose.insert(e.item);
    for (const auto& e : once) EXPECT_TRUE(loose.contains(e.item));
  }
}

TEST(FilterLowActivity, RejectsNonPositiveThreshold) {
  EXPECT_THROW(filter_low_activity({}, 0), ValidationError);
}

ChartSeries table(const std::string& text, int k = 10) {
  std::istringstream in(text);
  ChartTableOptions options;
  options.slots = k;
  return parse_chart_table(in, options);
}

TEST(ParseChartTable, SinglePeriodOfTen) {
  std::string text = "period_start,rank,item\n";
  for (int r = 1; r <= 10; ++r) text += "2013-01-06," + std::to_string(r) + ",b" + std::to_string(r) + "\n";
  const auto s = table(text);
  ASSERT_EQ(s.snapshots.size(), 1u);
  EXPECT_EQ(s.snapshots[0].entries.size(), 10u);
  EXPECT_EQ(s.period_seconds, 7 * 86400);
  EXPECT_FALSE(s.snapshots[0].entries[0].score);
}

TEST(ParseChartTable, RepeatedPeriodsGiveHalfDiversity) {
  std::string text;
  for (const char* day : {"2013-01-06", "2013-01-13"}) {
    for (int r = 1; r <= 10; ++r) text += std::string(day) + "," + std::to_string(r) + ",b" + std::to_string(r) + "\n";
  }
  const auto s = table(text);
  ASSERT_EQ(s.snapshots.size(), 2u);
  const auto d = diversity(s, Grouping::whole_series());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].diversity, 0.5);
}

TEST(ParseChartTable, FiftyTwoWeeksWithGap) {
  std::string text;
  const Timestamp start = 1357430400;  // a Sunday
  std::size_t rows = 0;
  for (int w = 0; w < 52; ++w) {
    if (w == 20) continue;  // missing week becomes an empty snapshot
    for (int r = 1; r <= 10; ++r) {
      text += std::to_string(start + w * 604800) + "," + std::to_string(r) + ",t" +
              std::to_string((w * 3 + r) % 40) + ",5\n";
      ++rows;
    }
  }
  const auto s = table(text);
  ASSERT_EQ(s.snapshots.size(), 52u);
  EXPECT_TRUE(s.snapshots[20].entries.empty());
  std::size_t total = 0;
  for (const auto& snap : s.snapshots) total += snap.entries.size();
  EXPECT_EQ(total, rows);
  EXPECT_EQ(s.snapshots[1].entries[0].score, 5.0);
}

TEST(ParseChartTable, RankErrors) {
  EXPECT_THROW(table("2013-01-06,0,a\n"), ValidationError);
  EXPECT_THROW(table("2013-01-06,11,a\n"), ValidationError);
  EXPECT_THROW(table("2013-01-06,1,a\n2013-01-06,1,b\n"), ValidationError);
  EXPECT_THROW(table("2013-01-06,1,a\n2013-01-06,3,b\n"), ValidationError);
  EXPECT_THROW(table("2013-01-06,x,a\n"), FormatError);
  EXPECT_THROW(table("2013-01-06,1\n"), FormatError);
}

TEST(ParseChartTable, GcdPeriodAndExplicitPeriod) {
  const auto s = table("0,1,a\n86400,1,b\n259200,1,c\n");
  EXPECT_EQ(s.period_seconds, 86400);
  EXPECT_EQ(s.snapshots.size(), 4u);

  std::istringstream in("0,1,a\n5000,1,b\n");
  ChartTableOptions options;
  options.period_seconds = 3600;
  EXPECT_THROW(parse_chart_table(in, options), ValidationError);
}

}  // namespace
}  // namespace chartdyn
