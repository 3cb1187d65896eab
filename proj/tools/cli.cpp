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

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "chartdyn/chartgen.hpp"
#include "chartdyn/error.hpp"
#include "chartdyn/ingest.hpp"
#include "chartdyn/maxent.hpp"
#include "chartdyn/metrics.hpp"
#include "chartdyn/series.hpp"
#include "chartdyn/statfit.hpp"

namespace chartdyn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("chartdyn");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CHARTDYN_LOG")) {
      l->set_level(spdlog::level::from_str(env));
    }
    return l;
  }();
  return *logger;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
  } else {
    dst = j.at(key).get<T>();
  }
}

template <class T>
void read_value(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

json RunConfig::to_json() const {
  return {
      {"inputs", inputs},
      {"input_format", input_format},
      {"period_seconds", optional_json(period_seconds)},
      {"slots", slots},
      {"origin", optional_json(origin)},
      {"min_total", min_total},
      {"permissive", permissive},
      {"max_skip_fraction", max_skip_fraction},
      {"label", label},
      {"threads", threads},
      {"factor", factor},
      {"slots_out", optional_json(slots_out)},
      {"nmin", nmin},
      {"counting", counting},
      {"censor", censor},
      {"grouping", grouping},
      {"split_at", optional_json(split_at)},
      {"weighting", weighting},
      {"prominence", prominence},
      {"out", out},
      {"seed", seed},
      {"synth_kind", synth_kind},
      {"model",
       {{"a_plus_1", model.a_plus_1},
        {"b", model.b},
        {"min_lifetime", model.min_lifetime},
        {"max_lifetime", model.max_lifetime}}},
      {"count", count},
      {"diurnal", diurnal.to_json()},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "inputs", "input_format", "period_seconds", "slots", "origin", "min_total",
      "permissive", "max_skip_fraction", "label", "threads", "factor", "slots_out",
      "nmin", "counting", "censor", "grouping", "split_at", "weighting", "prominence",
      "out", "seed", "synth_kind", "model", "count", "diurnal"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ValidationError("unknown config key: " + key);
  }
  RunConfig c;
  try {
    read_value(j, "inputs", c.inputs);
    read_value(j, "input_format", c.input_format);
    read_optional(j, "period_seconds", c.period_seconds);
    read_value(j, "slots", c.slots);
    read_optional(j, "origin", c.origin);
    read_value(j, "min_total", c.min_total);
    read_value(j, "permissive", c.permissive);
    read_value(j, "max_skip_fraction", c.max_skip_fraction);
    read_value(j, "label", c.label);
    read_value(j, "threads", c.threads);
    read_value(j, "factor", c.factor);
    read_optional(j, "slots_out", c.slots_out);
    read_value(j, "nmin", c.nmin);
    read_value(j, "counting", c.counting);
    read_value(j, "censor", c.censor);
    read_value(j, "grouping", c.grouping);
    read_optional(j, "split_at", c.split_at);
    read_value(j, "weighting", c.weighting);
    read_value(j, "prominence", c.prominence);
    read_value(j, "out", c.out);
    read_value(j, "seed", c.seed);
    read_value(j, "synth_kind", c.synth_kind);
    read_value(j, "count", c.count);
    if (j.contains("model")) {
      const auto& m = j.at("model");
      read_value(m, "a_plus_1", c.model.a_plus_1);
      read_value(m, "b", c.model.b);
      read_value(m, "min_lifetime", c.model.min_lifetime);
      read_value(m, "max_lifetime", c.model.max_lifetime);
    }
    if (j.contains("diurnal")) {
      const auto& d = j.at("diurnal");
      read_value(d, "days", c.diurnal.days);
      read_value(d, "posts_per_hour", c.diurnal.posts_per_hour);
      read_value(d, "kappa", c.diurnal.kappa);
      read_value(d, "peak_hour", c.diurnal.peak_hour);
      read_value(d, "fitness_tail", c.diurnal.fitness_tail);
      read_value(d, "comment_rate", c.diurnal.comment_rate);
      read_value(d, "decay_hours", c.diurnal.decay_hours);
      read_value(d, "activity_floor", c.diurnal.activity_floor);
      read_value(d, "horizon_hours", c.diurnal.horizon_hours);
      read_value(d, "slot_seconds", c.diurnal.slot_seconds);
      read_value(d, "origin", c.diurnal.origin);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad config value: ") + e.what());
  }
  return c;
}

void RunConfig::validate() const {
  static const std::set<std::string> kFormats = {"auto",        "csv",    "ndjson",
                                                 "chart_table", "series", "lifetimes"};
  if (!kFormats.contains(input_format)) {
    throw ValidationError("unknown input format: " + input_format);
  }
  if (period_seconds && *period_seconds <= 0) throw ValidationError("period must be positive");
  if (slots < 1) throw ValidationError("slots (K) must be >= 1");
  if (min_total < 1) throw ValidationError("min_total must be >= 1");
  if (!(max_skip_fraction >= 0 && max_skip_fraction <= 1)) {
    throw ValidationError("max_skip_fraction must lie in [0, 1]");
  }
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (factor < 1) throw ValidationError("factor must be >= 1");
  if (slots_out && *slots_out < 1) throw ValidationError("slots_out must be >= 1");
  if (nmin < 1) throw ValidationError("nmin must be >= 1");
  if (!parse_counting(counting)) throw ValidationError("unknown counting mode: " + counting);
  if (!parse_censor_policy(censor)) throw ValidationError("unknown censor policy: " + censor);
  if (!parse_grouping(grouping)) throw ValidationError("unknown grouping: " + grouping);
  if (!parse_weighting(weighting)) throw ValidationError("unknown weighting: " + weighting);
  if (split_at && !(*split_at > 0)) throw ValidationError("split_at must be positive");
  if (!(prominence >= 0 && prominence < 1)) {
    throw ValidationError("prominence must lie in [0, 1)");
  }
  if (out.empty()) throw ValidationError("output directory must be set");
  if (synth_kind != "lifetimes" && synth_kind != "diurnal") {
    throw ValidationError("unknown synth kind: " + synth_kind);
  }
}

namespace {

// ---------------------------------------------------------------------------
// Input helpers.

std::vector<EventRecord> read_events(const RunConfig& c, IngestReport& total) {
  std::vector<EventRecord> events;
  for (const auto& input : c.inputs) {
    ParseOptions options;
    options.format = c.input_format == "auto" ? event_format_for_path(input)
                                              : *parse_event_format(c.input_format);
    options.max_skip_fraction = c.max_skip_fraction;
    auto stream = open_input(input);
    auto parsed = parse_events(*stream, options);
    log().info("{}: {} records accepted", input, parsed.report.accepted());
    total.records_read += parsed.report.records_read;
    total.records_skipped += parsed.report.records_skipped;
    total.records_malformed += parsed.report.records_malformed;
    total.records_out_of_window += parsed.report.records_out_of_window;
    events.insert(events.end(), std::make_move_iterator(parsed.records.begin()),
                  std::make_move_iterator(parsed.records.end()));
  }
  return filter_low_activity(events, c.min_total, &total);
}

ChartSeries read_chart_table(const RunConfig& c, const std::string& path) {
  ChartTableOptions options;
  options.slots = c.slots;
  options.period_seconds = c.period_seconds;
  options.origin = c.origin;
  options.source_label = c.label.empty() ? fs::path(path).stem().string() : c.label;
  auto stream = open_input(path);
  return parse_chart_table(*stream, options);
}

bool is_lifetime_path(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".tsv" || ext == ".txt";
}

// A column named "L" if there is a header, else the first column.
std::vector<double> read_lifetime_file(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string line;
  std::size_t column = 0;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = chomp(line);
    if (text.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss{std::string(text)};
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (first) {
      first = false;
      if (!parse_double(fields[0])) {
        const auto it = std::find(fields.begin(), fields.end(), "L");
        column = it == fields.end() ? 0 : static_cast<std::size_t>(it - fields.begin());
        continue;
      }
    }
    const auto v = column < fields.size() ? parse_double(fields[column]) : std::nullopt;
    if (!v) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": not a lifetime value");
    }
    values.push_back(*v);
  }
  return values;
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json error_json(const std::string& code, const std::string& message, int status) {
  return {{"error", {{"code", code}, {"message", message}, {"exit_status", status}}}};
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_compile(const RunConfig& c, std::ostream& out) {
  if (c.inputs.empty()) throw ValidationError("compile needs at least one input");
  fs::create_directories(c.out);
  const fs::path series_path = fs::path(c.out) / "series.csv";

  if (c.input_format == "chart_table") {
    if (c.inputs.size() != 1) throw ValidationError("chart_table input takes one file");
    const auto series = read_chart_table(c, c.inputs.front());
    save_series(series_path, series,
                {{"config", c.to_json()}, {"stats", series_stats(series).to_json()}});
    out << "compiled " << series.snapshots.size() << " snapshots from chart table\n";
    return 0;
  }
  if (c.input_format == "series" || c.input_format == "lifetimes") {
    throw ValidationError("compile reads events or chart tables, not " + c.input_format);
  }

  IngestReport report;
  const auto events = read_events(c, report);
  if (events.empty() && !c.permissive) {
    throw ValidationError("no events accepted; pass --permissive to allow an empty series");
  }
  CompileOptions options;
  options.period_seconds = c.period_seconds.value_or(3600);
  options.slots = c.slots;
  options.origin = c.origin;
  options.source_label = c.label;
  options.threads = c.threads;
  const auto series = compile_charts(events, options);

  const auto stats = series_stats(series);
  save_series(series_path, series,
              {{"config", c.to_json()}, {"stats", stats.to_json()},
               {"ingest", report.to_json()}});
  write_json(fs::path(c.out) / "ingest_report.json",
             {{"config", c.to_json()}, {"report", report.to_json()}});
  out << "compiled " << events.size() << " events into " << stats.snapshot_count
      << " snapshots (" << stats.distinct_items << " distinct items)\n";
  return 0;
}

int cmd_aggregate(const RunConfig& c, std::ostream& out) {
  if (c.inputs.size() != 1) throw ValidationError("aggregate takes exactly one series");
  const auto input = load_series(c.inputs.front(), c.slots);
  const auto series = aggregate_series(input, c.factor, c.slots_out.value_or(input.slots));
  fs::create_directories(c.out);
  save_series(fs::path(c.out) / "series.csv", series,
              {{"config", c.to_json()}, {"stats", series_stats(series).to_json()}});
  out << "aggregated " << input.snapshots.size() << " snapshots into "
      << series.snapshots.size() << " (factor " << c.factor << ")\n";
  return 0;
}

struct Warnings {
  json list = json::array();
  void add(const std::string& code, const std::string& message) {
    log().warn("{}: {}", code, message);
    list.push_back({{"code", code}, {"message", message}});
  }
};

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  if (c.inputs.empty()) throw ValidationError("analyze needs at least one input");
  const auto censor = *parse_censor_policy(c.censor);
  const auto counting = *parse_counting(c.counting);
  const auto grouping = *parse_grouping(c.grouping);
  const auto weighting = *parse_weighting(c.weighting);
  const fs::path dir(c.out);
  fs::create_directories(dir);

  Warnings warnings;
  std::vector<double> values;
  json sources = json::array();
  std::string lifetimes_text = "item\tL\tfirst\tlast\tlcens\trcens\n";
  std::string diversity_text = "group\tN_a\tN_s\td\n";
  std::optional<std::int64_t> period;
  bool have_series = false;

  for (const auto& input : c.inputs) {
    std::string kind = c.input_format;
    if (kind == "auto") kind = is_lifetime_path(input) ? "lifetimes" : "series";
    if (kind == "lifetimes") {
      const auto v = read_lifetime_file(input);
      values.insert(values.end(), v.begin(), v.end());
      sources.push_back({{"path", input}, {"kind", "lifetimes"}, {"lifetimes", v.size()}});
      continue;
    }
    ChartSeries series;
    if (kind == "series") {
      series = load_series(input, c.slots);
    } else if (kind == "chart_table") {
      series = read_chart_table(c, input);
    } else {
      throw ValidationError("analyze reads series, chart tables or lifetimes, not " + kind);
    }
    have_series = true;
    if (!period) {
      period = series.period_seconds;
    } else if (*period != series.period_seconds) {
      warnings.add("mixed_periods", "inputs use different charting periods");
    }
    const std::string label =
        series.source_label.empty() ? fs::path(input).stem().string() : series.source_label;

    const auto samples = lifetimes(series, censor, counting);
    const auto all = lifetimes(series, CensorPolicy::kKeepAll, counting);
    const auto v = lifetime_values(samples);
    values.insert(values.end(), v.begin(), v.end());
    const auto tsv = lifetimes_tsv(samples);
    lifetimes_text += tsv.substr(tsv.find('\n') + 1);

    auto points = diversity(series, grouping);
    if (c.inputs.size() > 1) {
      for (auto& p : points) p.group = label + "/" + p.group;
    }
    const auto dtsv = diversity_tsv(points);
    diversity_text += dtsv.substr(dtsv.find('\n') + 1);

    json s = {{"path", input},
              {"kind", "series"},
              {"label", label},
              {"period_seconds", series.period_seconds},
              {"K", series.slots},
              {"snapshots", series.snapshots.size()},
              {"items", all.size()},
              {"lifetimes", samples.size()}};
    try {
      s["mean_lifetime"] = mean_lifetime(series);
    } catch (const UndefinedResultError& e) {
      s["mean_lifetime"] = nullptr;
      s["mean_lifetime_reason"] = e.what();
    }
    try {
      const auto top = top_stats(series);
      s["P_one"] = top.p_one;
      s["number_ones"] = top.number_ones;
      s["mean_time_to_top"] = top.mean_time_to_top;
    } catch (const UndefinedResultError& e) {
      s["P_one"] = nullptr;
      s["P_one_reason"] = e.what();
      s["number_ones"] = 0;
      s["mean_time_to_top"] = nullptr;
    }
    json d = json::array();
    for (const auto& p : points) {
      d.push_back({{"group", p.group}, {"N_a", p.unique_items}, {"N_s", p.slots},
                   {"d", p.diversity}});
    }
    s["diversity"] = std::move(d);
    sources.push_back(std::move(s));
  }

  if (have_series) {
    write_file(dir / "lifetimes.tsv", lifetimes_text);
    write_file(dir / "diversity.tsv", diversity_text);
  }

  json fit_json = {{"config", c.to_json()},
                   {"n_samples", values.size()},
                   {"nmin", c.nmin},
                   {"weighting", c.weighting},
                   {"fit", nullptr}};
  std::optional<BinnedDensity> density;
  if (values.size() < c.nmin) {
    warnings.add("insufficient_data", std::to_string(values.size()) +
                                          " lifetimes is fewer than N_min=" +
                                          std::to_string(c.nmin));
  } else {
    density = adaptive_bin(values, c.nmin);
    write_file(dir / "density.tsv", density->to_tsv());
    try {
      const auto fit = fit_maxent(*density, weighting);
      fit_json["fit"] = fit_report(fit);
      write_file(dir / "plot.tsv", plot_tsv(*density, fit.params()));
    } catch (const ValidationError& e) {
      warnings.add("insufficient_data", e.what());
    } catch (const NumericalError& e) {
      warnings.add("numerical", e.what());
    }
    if (c.split_at) {
      try {
        const auto [lower, upper] = fit_split(*density, *c.split_at, weighting);
        fit_json["split"] = {{"at", *c.split_at},
                             {"lower", fit_report(lower)},
                             {"upper", fit_report(upper)}};
      } catch (const ValidationError& e) {
        warnings.add("split_fit", e.what());
      } catch (const NumericalError& e) {
        warnings.add("numerical", e.what());
      }
    }
  }
  write_json(dir / "fit.json", fit_json);

  std::string maxima_text = "bin\tlocation\tlocation_seconds\tdensity\tprominence\n";
  if (density) {
    for (const auto& m : find_local_maxima(*density, c.prominence)) {
      maxima_text += std::to_string(m.bin) + '\t' + format_double(m.location) + '\t' +
                     (period ? format_double(m.location * static_cast<double>(*period)) : "") +
                     '\t' + format_double(m.density) + '\t' + format_double(m.prominence) +
                     '\n';
    }
  }
  write_file(dir / "maxima.tsv", maxima_text);

  write_json(dir / "metrics.json", {{"config", c.to_json()},
                                    {"sources", sources},
                                    {"n_lifetimes", values.size()},
                                    {"period_seconds", optional_json(period)}});
  write_json(dir / "run.json", {{"command", "analyze"},
                                {"config", c.to_json()},
                                {"warning", !warnings.list.empty()},
                                {"warnings", warnings.list}});
  out << "analyzed " << values.size() << " lifetimes";
  if (!fit_json["fit"].is_null()) {
    out << ": a+1=" << format_double(fit_json["fit"]["a_plus_1"].get<double>())
        << " b=" << format_double(fit_json["fit"]["b"].get<double>()) << " ("
        << fit_json["fit"]["classification"].get<std::string>() << ")";
  }
  out << '\n';
  if (!warnings.list.empty()) out << "warnings: " << warnings.list.size() << '\n';
  return 0;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  fs::create_directories(c.out);
  const fs::path dir(c.out);
  if (c.synth_kind == "lifetimes") {
    const auto sample = sample_lifetimes(c.model, c.count, c.seed);
    std::string text = "L\n";
    for (int l : sample) text += std::to_string(l) + '\n';
    write_file(dir / "lifetimes.tsv", text);
    out << "wrote " << sample.size() << " lifetimes\n";
  } else {
    const auto events = diurnal_events(c.diurnal, c.seed);
    std::ostringstream text;
    write_events(text, events, EventFormat::kCsv);
    write_file(dir / "events.csv", text.str());
    out << "wrote " << events.size() << " events\n";
  }
  write_json(dir / "synth.json", {{"config", c.to_json()}, {"kind", c.synth_kind}});
  return 0;
}

int cmd_verify(const RunConfig& c, bool inject_fault, bool write_report, std::ostream& out,
               std::ostream& err) {
  TheoryCheckOptions options;
  options.seed = c.seed;
  options.inject_fault = inject_fault;
  const auto checks = run_theory_checks(options);
  const auto sweep = entropy_refinement_sweep({0.0, 0.5}, 9, 7);

  json report = {{"config", c.to_json()}, {"checks", json::array()}, {"sweep", json::array()}};
  std::vector<std::string> failed;
  for (const auto& check : checks) {
    out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
    report["checks"].push_back(
        {{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
    if (!check.passed) failed.push_back(check.name);
  }
  out << "refinement sweep (points, spacing, entropy, change):\n";
  for (const auto& step : sweep) {
    out << "  " << step.points << '\t' << format_double(step.spacing) << '\t'
        << format_double(step.entropy) << '\t' << format_double(step.change) << '\n';
    report["sweep"].push_back({{"points", step.points},
                               {"spacing", step.spacing},
                               {"entropy", step.entropy},
                               {"change", step.change}});
  }
  if (write_report) {
    fs::create_directories(c.out);
    write_json(fs::path(c.out) / "verify.json", report);
  }
  if (!failed.empty()) {
    std::string names;
    for (const auto& f : failed) names += (names.empty() ? "" : ",") + f;
    auto j = error_json("invariant", "invariant failed: " + names,
                        exit_status(ErrorCode::kInvariant));
    j["error"]["failed"] = failed;
    err << j.dump() << '\n';
    return exit_status(ErrorCode::kInvariant);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Flag plumbing: each flag writes into its own holder, and holders whose flag
// was given are copied over the config file values afterwards.

using Overrides = std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>>;

template <class T, class Set>
CLI::Option* bind_option(CLI::App* app, Overrides& ov, const std::string& name,
                  const std::string& desc, Set set) {
  auto value = std::make_shared<T>();
  auto* opt = app->add_option(name, *value, desc);
  ov.emplace_back(opt, [value, set](RunConfig& c) { set(c, *value); });
  return opt;
}

template <class T>
CLI::Option* bind_option(CLI::App* app, Overrides& ov, const std::string& name,
                  const std::string& desc, T RunConfig::*field) {
  return bind_option<T>(app, ov, name, desc, [field](RunConfig& c, const T& v) { c.*field = v; });
}

template <class T>
CLI::Option* bind_option(CLI::App* app, Overrides& ov, const std::string& name,
                  const std::string& desc, std::optional<T> RunConfig::*field) {
  return bind_option<T>(app, ov, name, desc, [field](RunConfig& c, const T& v) { c.*field = v; });
}

void bind_flag(CLI::App* app, Overrides& ov, const std::string& name, const std::string& desc,
               bool RunConfig::*field) {
  auto* opt = app->add_flag(name, desc);
  ov.emplace_back(opt, [field](RunConfig& c) { c.*field = true; });
}

void bind_origin(CLI::App* app, Overrides& ov) {
  bind_option<std::string>(app, ov, "--origin", "period grid origin (epoch seconds or ISO date)",
                    [](RunConfig& c, const std::string& v) {
                      const auto ts = parse_timestamp(v);
                      if (!ts) throw ValidationError("bad --origin timestamp: " + v);
                      c.origin = *ts;
                    });
}

struct Command {
  explicit Command(CLI::App* a) : app(a) {}

  CLI::App* app;
  Overrides overrides;
  CLI::Option* out_option = nullptr;
  std::string config_path;
  std::string dump_path;
};

void add_common(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "JSON run config; flags override it");
  cmd.app->add_option("--dump-config", cmd.dump_path,
                      "write the effective config to this path and exit");
  cmd.out_option =
      bind_option(cmd.app, cmd.overrides, "--out", "output directory", &RunConfig::out);
  bind_option(cmd.app, cmd.overrides, "--seed", "random seed", &RunConfig::seed);
}

void add_inputs(Command& cmd) {
  bind_option(cmd.app, cmd.overrides, "inputs,-i,--input", "input files", &RunConfig::inputs);
  bind_option(cmd.app, cmd.overrides, "--format",
       "auto|csv|ndjson|chart_table|series|lifetimes", &RunConfig::input_format);
}

RunConfig resolve(const Command& cmd) {
  RunConfig c;
  if (!cmd.config_path.empty()) {
    try {
      c = RunConfig::from_json(json::parse(read_file(cmd.config_path)));
    } catch (const json::parse_error& e) {
      throw FormatError(cmd.config_path + ": " + e.what());
    }
  }
  for (const auto& [opt, apply] : cmd.overrides) {
    if (opt->count() > 0) apply(c);
  }
  c.validate();
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chartdyn: popularity chart compilation and lifetime analysis"};
  app.require_subcommand(1);

  Command compile{app.add_subcommand("compile", "compile top-K charts from events")};
  add_common(compile);
  add_inputs(compile);
  bind_option(compile.app, compile.overrides, "--period", "charting period in seconds",
       &RunConfig::period_seconds);
  bind_option(compile.app, compile.overrides, "--slots", "chart size K", &RunConfig::slots);
  bind_origin(compile.app, compile.overrides);
  bind_option(compile.app, compile.overrides, "--min-total", "drop items with less total weight",
       &RunConfig::min_total);
  bind_flag(compile.app, compile.overrides, "--permissive", "allow an empty series",
            &RunConfig::permissive);
  bind_option(compile.app, compile.overrides, "--max-skip", "tolerated malformed fraction",
       &RunConfig::max_skip_fraction);
  bind_option(compile.app, compile.overrides, "--label", "source label", &RunConfig::label);
  bind_option(compile.app, compile.overrides, "--threads", "ranking threads", &RunConfig::threads);

  Command aggregate{app.add_subcommand("aggregate", "coarsen a series by an integer factor")};
  add_common(aggregate);
  add_inputs(aggregate);
  bind_option(aggregate.app, aggregate.overrides, "--factor", "periods per output period",
       &RunConfig::factor);
  bind_option(aggregate.app, aggregate.overrides, "--slots", "K when the series has no sidecar",
       &RunConfig::slots);
  bind_option(aggregate.app, aggregate.overrides, "--slots-out", "output chart size",
       &RunConfig::slots_out);

  Command analyze{app.add_subcommand("analyze", "lifetime metrics, binning and fits")};
  add_common(analyze);
  add_inputs(analyze);
  bind_option(analyze.app, analyze.overrides, "--slots", "K for chart tables or bare series",
       &RunConfig::slots);
  bind_option(analyze.app, analyze.overrides, "--period", "period for chart tables",
       &RunConfig::period_seconds);
  bind_origin(analyze.app, analyze.overrides);
  bind_option(analyze.app, analyze.overrides, "--label", "source label", &RunConfig::label);
  bind_option(analyze.app, analyze.overrides, "--nmin", "minimum samples per bin", &RunConfig::nmin);
  bind_option(analyze.app, analyze.overrides, "--counting", "total|longest_run",
       &RunConfig::counting);
  bind_option(analyze.app, analyze.overrides, "--censor", "drop_censored|keep_all",
       &RunConfig::censor);
  bind_option(analyze.app, analyze.overrides, "--grouping",
       "calendar_year|whole_series|fixed_window:<n>", &RunConfig::grouping);
  bind_option(analyze.app, analyze.overrides, "--split-at", "fit two regimes split at this lifetime",
       &RunConfig::split_at);
  bind_option(analyze.app, analyze.overrides, "--weighting", "uniform|count", &RunConfig::weighting);
  bind_option(analyze.app, analyze.overrides, "--prominence", "relative prominence threshold",
       &RunConfig::prominence);

  Command synth{app.add_subcommand("synth", "write seeded synthetic fixtures")};
  add_common(synth);
  auto& so = synth.overrides;
  bind_option(synth.app, so, "--kind", "lifetimes|diurnal", &RunConfig::synth_kind);
  bind_option(synth.app, so, "--count", "lifetime samples", &RunConfig::count);
  bind_option<double>(synth.app, so, "--a-plus-1", "model exponent a+1",
               [](RunConfig& c, double v) { c.model.a_plus_1 = v; });
  bind_option<double>(synth.app, so, "--b", "model curvature b",
               [](RunConfig& c, double v) { c.model.b = v; });
  bind_option<int>(synth.app, so, "--lmin", "smallest lifetime",
            [](RunConfig& c, int v) { c.model.min_lifetime = v; });
  bind_option<int>(synth.app, so, "--lmax", "largest lifetime",
            [](RunConfig& c, int v) { c.model.max_lifetime = v; });
  bind_option<int>(synth.app, so, "--days", "diurnal stream length in days",
            [](RunConfig& c, int v) { c.diurnal.days = v; });
  bind_option<double>(synth.app, so, "--posts-per-hour", "mean arrival rate",
               [](RunConfig& c, double v) { c.diurnal.posts_per_hour = v; });
  bind_option<double>(synth.app, so, "--kappa", "day-cycle concentration, 0 for a flat stream",
               [](RunConfig& c, double v) { c.diurnal.kappa = v; });
  bind_option<double>(synth.app, so, "--decay-hours", "attention decay time",
               [](RunConfig& c, double v) { c.diurnal.decay_hours = v; });
  bind_option<double>(synth.app, so, "--comment-rate", "comments per hour per unit fitness",
               [](RunConfig& c, double v) { c.diurnal.comment_rate = v; });
  bind_option<int>(synth.app, so, "--slot-seconds", "event time resolution",
            [](RunConfig& c, int v) { c.diurnal.slot_seconds = v; });

  Command verify{app.add_subcommand("verify", "maximum-entropy self-checks")};
  add_common(verify);
  bool inject_fault = false;
  verify.app->add_flag("--inject-fault", inject_fault,
                       "test hook: distort the Gaussian so the checks must fail");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("validation", e.what(), 2).dump() << '\n';
    return 2;
  }

  for (Command* cmd : {&compile, &aggregate, &analyze, &synth, &verify}) {
    if (!cmd->app->parsed()) continue;
    try {
      const RunConfig config = resolve(*cmd);
      if (!cmd->dump_path.empty()) {
        write_file(cmd->dump_path, config.to_json().dump(2) + "\n");
        return 0;
      }
      if (cmd == &compile) return cmd_compile(config, out);
      if (cmd == &aggregate) return cmd_aggregate(config, out);
      if (cmd == &analyze) return cmd_analyze(config, out);
      if (cmd == &synth) return cmd_synth(config, out);
      const bool write_report = cmd->out_option->count() > 0 ||
                                !cmd->config_path.empty();
      return cmd_verify(config, inject_fault, write_report, out, err);
    } catch (const Error& e) {
      const int status = exit_status(e.code());
      err << error_json(std::string(error_code_name(e.code())), e.what(), status).dump()
          << '\n';
      return status;
    } catch (const fs::filesystem_error& e) {
      err << error_json("io", e.what(), 1).dump() << '\n';
      return 1;
    }
  }
  return 2;
}

}  // namespace chartdyn::cli
