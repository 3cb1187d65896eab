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

// The chartdyn command line: compile, aggregate, analyze, synth, verify.
//
// Every subcommand reads an optional JSON config (--config) and then applies
// flag overrides; the effective config is embedded in each JSON output.

#ifndef CHARTDYN_TOOLS_CLI_HPP_
#define CHARTDYN_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdyn/synth.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn::cli {

struct RunConfig {
  std::vector<std::string> inputs;
  // auto, csv, ndjson, chart_table, series, lifetimes
  std::string input_format = "auto";
  std::optional<std::int64_t> period_seconds;  // compile default: 3600
  int slots = 100;
  std::optional<Timestamp> origin;
  std::int64_t min_total = 1;
  bool permissive = false;
  double max_skip_fraction = 0.01;
  std::string label;
  unsigned threads = 1;

  int factor = 24;
  std::optional<int> slots_out;

  std::size_t nmin = 100;
  std::string counting = "total";
  std::string censor = "drop_censored";
  std::string grouping = "calendar_year";
  std::optional<double> split_at;
  std::string weighting = "uniform";
  double prominence = 0.3;

  std::string out = "out";
  std::uint64_t seed = 1;

  std::string synth_kind = "lifetimes";  // lifetimes or diurnal
  LifetimeModel model;
  std::size_t count = 100000;
  DiurnalStream diurnal;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);

  // ValidationError on out-of-range fields or unknown enum names.
  void validate() const;
};

// Runs one invocation; args excludes the program name. Returns the exit
// status. Human-readable output goes to `out`, error JSON to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chartdyn::cli

#endif  // CHARTDYN_TOOLS_CLI_HPP_
