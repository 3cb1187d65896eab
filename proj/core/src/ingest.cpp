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

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "chartdyn/error.hpp"

namespace chartdyn {

std::optional<EventFormat> parse_event_format(std::string_view name) {
  if (name == "ndjson" || name == "jsonl") return EventFormat::kNdjson;
  if (name == "csv") return EventFormat::kCsv;
  return std::nullopt;
}

std::string_view event_format_name(EventFormat format) {
  return format == EventFormat::kNdjson ? "ndjson" : "csv";
}

EventFormat event_format_for_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  if (p.extension() == ".gz") p = p.stem();
  const auto ext = p.extension();
  if (ext == ".ndjson" || ext == ".jsonl" || ext == ".json") {
    return EventFormat::kNdjson;
  }
  return EventFormat::kCsv;
}

nlohmann::json IngestReport::to_json() const {
  return {
      {"records_read", records_read},
      {"records_skipped", records_skipped},
      {"records_malformed", records_malformed},
      {"records_out_of_window", records_out_of_window},
      {"records_accepted", accepted()},
      {"items_dropped_by_filter", items_dropped_by_filter},
      {"distinct_items", distinct_items},
  };
}

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

bool is_csv_header(const std::vector<std::string>& fields) {
  if (fields.size() < 2 || fields.size() > 3) return false;
  if (fields[0] != "item" || fields[1] != "ts") return false;
  return fields.size() == 2 || fields[2] == "n" || fields[2] == "weight";
}

std::optional<EventRecord> parse_csv_event(const std::vector<std::string>& f) {
  if (f.size() < 2 || f.size() > 3 || f[0].empty()) return std::nullopt;
  auto ts = parse_int64(f[1]);
  if (!ts) return std::nullopt;
  std::int64_t weight = 1;
  if (f.size() == 3) {
    auto w = parse_int64(f[2]);
    if (!w || *w < 1) return std::nullopt;
    weight = *w;
  }
  return EventRecord{f[0], *ts, weight};
}

std::optional<EventRecord> parse_ndjson_event(std::string_view line) {
  auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  auto item = doc.find("item");
  auto ts = doc.find("ts");
  if (item == doc.end() || !item->is_string() || ts == doc.end() ||
      !ts->is_number_integer()) {
    return std::nullopt;
  }
  EventRecord rec{item->get<std::string>(), ts->get<std::int64_t>(), 1};
  if (rec.item.empty()) return std::nullopt;
  if (auto n = doc.find("n"); n != doc.end()) {
    if (!n->is_number_integer()) return std::nullopt;
    rec.weight = n->get<std::int64_t>();
    if (rec.weight < 1) return std::nullopt;
  }
  return rec;
}

}  // namespace

ParsedEvents parse_events(std::istream& in, const ParseOptions& options) {
  if (!in) throw IoError("event source is not readable");
  ParsedEvents out;
  IngestReport& report = out.report;
  std::string raw;
  bool first_line = true;
  while (std::getline(in, raw)) {
    std::string_view line = chomp(raw);
    if (is_blank(line)) continue;

    std::optional<EventRecord> rec;
    if (options.format == EventFormat::kCsv) {
      auto fields = split_csv_line(line);
      if (first_line && fields && is_csv_header(*fields)) {
        first_line = false;
        continue;
      }
      if (fields) rec = parse_csv_event(*fields);
    } else {
      rec = parse_ndjson_event(line);
    }
    first_line = false;

    ++report.records_read;
    if (!rec) {
      ++report.records_malformed;
      ++report.records_skipped;
      continue;
    }
    if (!options.window.contains(rec->ts)) {
      ++report.records_out_of_window;
      ++report.records_skipped;
      continue;
    }
    out.records.push_back(std::move(*rec));
  }
  if (in.bad()) throw IoError("read error while parsing events");

  if (report.records_read > 0) {
    const double fraction = static_cast<double>(report.records_malformed) /
                            static_cast<double>(report.records_read);
    if (fraction > options.max_skip_fraction) {
      throw FormatError(std::to_string(report.records_malformed) + " of " +
                        std::to_string(report.records_read) +
                        " lines malformed, above the tolerated fraction " +
                        format_double(options.max_skip_fraction));
    }
  }

  std::unordered_set<std::string_view> items;
  for (const auto& r : out.records) items.insert(r.item);
  report.distinct_items = items.size();
  return out;
}

void write_events(std::ostream& out, std::span<const EventRecord> events,
                  EventFormat format) {
  if (format == EventFormat::kCsv) {
    out << "item,ts,n\n";
    for (const auto& e : events) {
      out << csv_field(e.item) << ',' << e.ts << ',' << e.weight << '\n';
    }
    return;
  }
  for (const auto& e : events) {
    nlohmann::json j = {{"item", e.item}, {"ts", e.ts}, {"n", e.weight}};
    out << j.dump() << '\n';
  }
}

std::vector<EventRecord> filter_low_activity(std::span<const EventRecord> events,
                                             std::int64_t min_total,
                                             IngestReport* report) {
  if (min_total < 1) throw ValidationError("min_total must be >= 1");

  std::unordered_map<std::string_view, std::int64_t> totals;
  for (const auto& e : events) {
    auto& t = totals[e.item];
    t = (t > INT64_MAX - e.weight) ? INT64_MAX : t + e.weight;
  }

  std::vector<EventRecord> kept;
  for (const auto& e : events) {
    if (totals[e.item] >= min_total) kept.push_back(e);
  }

  if (report != nullptr) {
    std::uint64_t retained = 0;
    for (const auto& [item, total] : totals) {
      if (total >= min_total) ++retained;
    }
    report->items_dropped_by_filter += totals.size() - retained;
    report->distinct_items = retained;
  }
  return kept;
}

namespace {

struct TableRow {
  std::optional<std::int64_t> period_index;
  Timestamp period_start = 0;
  int rank = 0;
  std::string item;
  std::optional<double> score;
};

TableRow parse_table_row(const std::vector<std::string>& f, bool series_form,
                         std::size_t line_no) {
  auto fail = [line_no](const std::string& why) {
    return FormatError("chart table line " + std::to_string(line_no) + ": " + why);
  };
  TableRow row;
  std::size_t col = 0;
  if (series_form) {
    if (f.size() != 5) throw fail("expected 5 columns");
    auto idx = parse_int64(f[col++]);
    if (!idx) throw fail("bad period_index");
    row.period_index = *idx;
  } else if (f.size() != 3 && f.size() != 4) {
    throw fail("expected 3 or 4 columns");
  }
  auto start = parse_timestamp(f[col++]);
  if (!start) throw fail("bad period_start");
  row.period_start = *start;
  auto rank = parse_int64(f[col++]);
  if (!rank) throw fail("bad rank");
  if (*rank < 1) throw ValidationError("rank must be >= 1 (line " +
                                       std::to_string(line_no) + ")");
  if (*rank > INT32_MAX) throw ValidationError("rank out of range");
  row.rank = static_cast<int>(*rank);
  row.item = f[col++];
  if (row.item.empty()) throw fail("empty item");
  if (col < f.size() && !f[col].empty()) {
    auto score = parse_double(f[col]);
    if (!score) throw fail("bad score");
    if (*score < 0) throw ValidationError("score must be non-negative");
    row.score = *score;
  }
  return row;
}

}  // namespace

ChartSeries parse_chart_table(std::istream& in, const ChartTableOptions& options) {
  if (!in) throw IoError("chart table source is not readable");
  if (options.slots < 1) throw ValidationError("slots must be >= 1");

  std::vector<TableRow> rows;
  std::optional<bool> series_form;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = chomp(raw);
    if (is_blank(line)) continue;
    auto fields = split_csv_line(line);
    if (!fields) {
      throw FormatError("chart table line " + std::to_string(line_no) +
                        ": unterminated quote");
    }
    if (rows.empty() && !series_form) {
      const auto& head = (*fields)[0];
      if (head == "period_index") {
        series_form = true;
        continue;
      }
      if (head == "period_start") {
        series_form = false;
        continue;
      }
    }
    if (!series_form) series_form = fields->size() == 5;
    rows.push_back(parse_table_row(*fields, *series_form, line_no));
  }
  if (in.bad()) throw IoError("read error while parsing chart table");

  ChartSeries series;
  series.slots = options.slots;
  series.source_label = options.source_label;
  if (rows.empty()) {
    series.period_seconds = options.period_seconds.value_or(7 * 86400);
    series.origin = options.origin.value_or(0);
    return series;
  }

  std::map<Timestamp, std::vector<const TableRow*>> by_start;
  for (const auto& r : rows) by_start[r.period_start].push_back(&r);

  std::int64_t period = 0;
  if (options.period_seconds) {
    period = *options.period_seconds;
  } else {
    Timestamp prev = by_start.begin()->first;
    for (const auto& [start, _] : by_start) {
      period = std::gcd(period, start - prev);
      prev = start;
    }
    if (period == 0) period = 7 * 86400;
  }
  if (period < 1) throw ValidationError("period_seconds must be >= 1");
  series.period_seconds = period;

  if (options.origin) {
    series.origin = *options.origin;
  } else if (const auto* r0 = by_start.begin()->second.front(); r0->period_index) {
    series.origin = r0->period_start - *r0->period_index * period;
  } else {
    series.origin = by_start.begin()->first;
  }

  std::vector<ChartSnapshot> snaps;
  for (const auto& [start, group] : by_start) {
    const Timestamp offset = start - series.origin;
    if (offset < 0 || offset % period != 0) {
      throw ValidationError("period_start " + std::to_string(start) +
                            " is not aligned to origin and period");
    }
    ChartSnapshot snap;
    snap.period_index = offset / period;
    snap.period_start = start;
    snap.period_end = start + period;
    for (const TableRow* r : group) {
      if (r->period_index && *r->period_index != snap.period_index) {
        throw ValidationError("period_index disagrees with period_start " +
                              std::to_string(start));
      }
      if (r->rank > options.slots) {
        throw ValidationError("rank " + std::to_string(r->rank) +
                              " exceeds slots " + std::to_string(options.slots));
      }
      snap.entries.push_back({r->rank, r->item, r->score});
    }
    std::sort(snap.entries.begin(), snap.entries.end(),
              [](const ChartEntry& a, const ChartEntry& b) { return a.rank < b.rank; });
    for (std::size_t i = 0; i < snap.entries.size(); ++i) {
      if (i > 0 && snap.entries[i].rank == snap.entries[i - 1].rank) {
        throw ValidationError("duplicate rank " +
                              std::to_string(snap.entries[i].rank) +
                              " in period starting " + std::to_string(start));
      }
      if (snap.entries[i].rank != static_cast<int>(i) + 1) {
        throw ValidationError("ranks in period starting " + std::to_string(start) +
                              " are not contiguous from 1");
      }
    }
    snaps.push_back(std::move(snap));
  }

  // Materialize gaps as empty snapshots.
  const std::int64_t first = snaps.front().period_index;
  const std::int64_t last = snaps.back().period_index;
  series.snapshots.reserve(static_cast<std::size_t>(last - first + 1));
  std::size_t next = 0;
  for (std::int64_t idx = first; idx <= last; ++idx) {
    if (next < snaps.size() && snaps[next].period_index == idx) {
      series.snapshots.push_back(std::move(snaps[next++]));
    } else {
      ChartSnapshot empty;
      empty.period_index = idx;
      empty.period_start = series.origin + idx * period;
      empty.period_end = empty.period_start + period;
      series.snapshots.push_back(std::move(empty));
    }
  }
  return series;
}

}  // namespace chartdyn
