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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "chartdyn/chartgen.hpp"
#include "chartdyn/maxent.hpp"
#include "chartdyn/statfit.hpp"
#include "chartdyn/synth.hpp"

namespace chartdyn {
namespace {

std::vector<EventRecord> events(std::size_t n, std::size_t items, int hours) {
  std::mt19937_64 rng(42);
  std::vector<EventRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"item" + std::to_string(rng() % items),
                   1'700'006'400 + static_cast<Timestamp>(rng() % (hours * 3600ULL)),
                   1 + static_cast<std::int64_t>(rng() % 3)});
  }
  return out;
}

void BM_CompileCharts(benchmark::State& state) {
  const auto ev = events(static_cast<std::size_t>(state.range(0)), 20000, 24 * 30);
  CompileOptions o;
  o.period_seconds = 3600;
  o.slots = 100;
  o.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(compile_charts(ev, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompileCharts)
    ->Args({100'000, 1})
    ->Args({1'000'000, 1})
    ->Args({1'000'000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_AggregateSeries(benchmark::State& state) {
  CompileOptions o;
  o.period_seconds = 3600;
  o.slots = 50;
  const auto hourly = compile_charts(events(500'000, 5000, 24 * 60), o);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_series(hourly, 24, 50));
}
BENCHMARK(BM_AggregateSeries)->Unit(benchmark::kMillisecond);

void BM_BinAndFit(benchmark::State& state) {
  const auto sample = sample_lifetimes({}, static_cast<std::size_t>(state.range(0)), 7);
  const std::vector<double> values(sample.begin(), sample.end());
  for (auto _ : state) benchmark::DoNotOptimize(fit_maxent(adaptive_bin(values, 500)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BinAndFit)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_SampleLifetimes(benchmark::State& state) {
  LifetimeModel m;
  m.b = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_lifetimes(m, 100'000, 3));
}
BENCHMARK(BM_SampleLifetimes)->Arg(89)->Arg(0)->Arg(-56)->Unit(benchmark::kMillisecond);

void BM_TheoryChecks(benchmark::State& state) {
  TheoryCheckOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(run_theory_checks(o));
}
BENCHMARK(BM_TheoryChecks)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace chartdyn

BENCHMARK_MAIN();
