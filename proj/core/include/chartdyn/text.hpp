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

// Small text and file helpers shared by the readers and writers.

#ifndef CHARTDYN_TEXT_HPP_
#define CHARTDYN_TEXT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartdyn {

using Timestamp = std::int64_t;  // seconds since Unix epoch, UTC

// Splits one CSV record. Fields may be double-quoted; a doubled quote inside
// a quoted field is a literal quote. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

// Quotes a field when it contains a comma, quote, or line break.
std::string csv_field(std::string_view field);

// Drops a trailing '\r' so CRLF files read like LF files.
std::string_view chomp(std::string_view line);

std::optional<std::int64_t> parse_int64(std::string_view text);
std::optional<double> parse_double(std::string_view text);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Epoch seconds, "YYYY-MM-DD", or "YYYY-MM-DDTHH:MM:SS" with optional 'Z'.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Midnight UTC of the day containing ts.
Timestamp utc_midnight(Timestamp ts);

int utc_year(Timestamp ts);

// Whole-file read; files ending in ".gz" are inflated transparently.
std::string read_file(const std::filesystem::path& path);

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace chartdyn

#endif  // CHARTDYN_TEXT_HPP_
