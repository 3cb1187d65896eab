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

// Seeded fixture generators. Output depends only on the parameters and the
// seed; the generators use Boost.Random so streams match across platforms.

#ifndef CHARTDYN_SYNTH_HPP_
#define CHARTDYN_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "chartdyn/ingest.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn {

struct LifetimeModel {
  double a_plus_1 = 1.43;
  double b = 0.89;
  int min_lifetime = 1;
  int max_lifetime = 200;
};

// Draws a continuous L on [min - 1/2, max + 1/2] with density
// proportional to L^-(a+1) exp(-b ln^2 L), then rounds to the nearest
// integer. ValidationError for min < 1, max < min or non-finite a, b.
std::vector<int> sample_lifetimes(const LifetimeModel& model, std::size_t count,
                                  std::uint64_t seed);

// Posts arrive as a Poisson process whose rate follows a von Mises day
// shape exp(kappa (cos(2 pi (h - peak_hour) / 24) - 1)), scaled so the
// daily mean is posts_per_hour; kappa = 0 gives a flat control. Each post
// has a Pareto fitness f and draws Poisson comment counts per slot at rate
//   comment_rate * f * exp(-age / decay_hours) * (floor + (1 - floor) * a(h))
// where a(h) is the normalized arrival shape.
struct DiurnalStream {
  int days = 30;
  double posts_per_hour = 20;
  double kappa = 8;
  double peak_hour = 14;
  double fitness_tail = 1.5;
  double comment_rate = 200;
  double decay_hours = 6;
  double activity_floor = 0.3;
  int horizon_hours = 96;
  int slot_seconds = 600;
  Timestamp origin = 1'600'041'600;  // 2020-09-14T00:00:00Z

  nlohmann::json to_json() const;
};

// One record per (post, slot) with a nonzero count; ts is the slot start and
// weight the count. Sorted by ts, then post.
std::vector<EventRecord> diurnal_events(const DiurnalStream& params, std::uint64_t seed);

}  // namespace chartdyn

#endif  // CHARTDYN_SYNTH_HPP_
