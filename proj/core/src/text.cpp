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

#include "chartdyn/text.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chartdyn/error.hpp"

namespace chartdyn {

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool at_field_start = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && at_field_start) {
      quoted = true;
      at_field_start = false;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      at_field_start = true;
    } else {
      field.push_back(c);
      at_field_start = false;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::optional<std::int64_t> parse_int64(std::string_view text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

namespace {

std::optional<int> fixed_digits(std::string_view text, std::size_t pos,
                                std::size_t len) {
  if (pos + len > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (auto epoch = parse_int64(text)) return *epoch;

  using namespace std::chrono;
  // YYYY-MM-DD[THH:MM:SS[Z]]
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = fixed_digits(text, 0, 4);
  auto m = fixed_digits(text, 5, 2);
  auto d = fixed_digits(text, 8, 2);
  if (!y || !m || !d) return std::nullopt;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)},
                     day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts = sys_seconds{sys_days{ymd}}.time_since_epoch().count();
  if (text.size() == 10) return ts;

  std::string_view rest = text.substr(10);
  if (rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.size() != 9 || (rest[0] != 'T' && rest[0] != ' ') || rest[3] != ':' ||
      rest[6] != ':') {
    return std::nullopt;
  }
  auto hh = fixed_digits(rest, 1, 2);
  auto mm = fixed_digits(rest, 4, 2);
  auto ss = fixed_digits(rest, 7, 2);
  if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 59) return std::nullopt;
  return ts + *hh * 3600 + *mm * 60 + *ss;
}

Timestamp utc_midnight(Timestamp ts) {
  using namespace std::chrono;
  return sys_seconds{floor<days>(sys_seconds{seconds{ts}})}
      .time_since_epoch()
      .count();
}

int utc_year(Timestamp ts) {
  using namespace std::chrono;
  year_month_day ymd{floor<days>(sys_seconds{seconds{ts}})};
  return static_cast<int>(ymd.year());
}

namespace {

bool has_gz_extension(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

std::string inflate_file(const std::filesystem::path& path) {
  gzFile gz = gzopen(path.c_str(), "rb");
  if (gz == nullptr) throw IoError("cannot open " + path.string());
  std::string out;
  std::array<char, 1 << 16> buf{};
  for (;;) {
    int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      gzclose(gz);
      throw IoError("gzip read failed for " + path.string());
    }
    if (n == 0) break;
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  gzclose(gz);
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  if (has_gz_extension(path)) return inflate_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
  if (has_gz_extension(path)) {
    return std::make_unique<std::istringstream>(inflate_file(path));
  }
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw IoError("cannot open " + path.string());
  return in;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace chartdyn
