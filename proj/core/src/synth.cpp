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

#include "chartdyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "chartdyn/error.hpp"

namespace chartdyn {

namespace {

using Engine = boost::random::mt19937_64;

// Inverse CDF of a density exp(-a s - b s^2) on [s0, s1].
class LogScaleSampler {
 public:
  LogScaleSampler(double a, double b, double s0, double s1) : a_(a), b_(b), s0_(s0), s1_(s1) {
    if (b > 0) {
      normal_ = boost::math::normal_distribution<double>(-a / (2 * b), std::sqrt(1 / (2 * b)));
      c0_ = boost::math::cdf(normal_, s0);
      c1_ = boost::math::cdf(normal_, s1);
    } else if (b < 0) {
      // No closed form; tabulate the CDF on a fine grid.
      constexpr int kPoints = 20001;
      grid_.resize(kPoints);
      cdf_.assign(kPoints, 0.0);
      const double h = (s1 - s0) / (kPoints - 1);
      double prev = density(s0);
      for (int i = 0; i < kPoints; ++i) grid_[static_cast<std::size_t>(i)] = s0 + h * i;
      for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double cur = density(grid_[i]);
        cdf_[i] = cdf_[i - 1] + 0.5 * h * (prev + cur);
        prev = cur;
      }
      const double total = cdf_.back();
      for (auto& c : cdf_) c /= total;
    }
  }

  double operator()(double u) const {
    if (b_ > 0) return boost::math::quantile(normal_, c0_ + u * (c1_ - c0_));
    if (b_ < 0) {
      auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      if (it == cdf_.begin()) return s0_;
      if (it == cdf_.end()) return s1_;
      const auto i = static_cast<std::size_t>(it - cdf_.begin());
      const double f = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
      return grid_[i - 1] + f * (grid_[i] - grid_[i - 1]);
    }
    if (std::abs(a_) < 1e-12) return s0_ + u * (s1_ - s0_);
    // Truncated exponential in s.
    const double e0 = std::exp(-a_ * s0_);
    const double e1 = std::exp(-a_ * s1_);
    return -std::log(e0 + u * (e1 - e0)) / a_;
  }

 private:
  double density(double s) const { return std::exp(-a_ * s - b_ * s * s); }

  double a_, b_, s0_, s1_;
  boost::math::normal_distribution<double> normal_;
  double c0_ = 0, c1_ = 1;
  std::vector<double> grid_, cdf_;
};

}  // namespace

std::vector<int> sample_lifetimes(const LifetimeModel& model, std::size_t count,
                                  std::uint64_t seed) {
  if (model.min_lifetime < 1 || model.max_lifetime < model.min_lifetime) {
    throw ValidationError("lifetime range must satisfy 1 <= min <= max");
  }
  if (!std::isfinite(model.a_plus_1) || !std::isfinite(model.b)) {
    throw ValidationError("model coefficients must be finite");
  }
  const double s0 = std::log(model.min_lifetime - 0.5);
  const double s1 = std::log(model.max_lifetime + 0.5);
  const LogScaleSampler draw(model.a_plus_1 - 1, model.b, s0, s1);

  Engine rng(seed);
  boost::random::uniform_01<double> unit;
  std::vector<int> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double l = std::round(std::exp(draw(unit(rng))));
    out.push_back(std::clamp(static_cast<int>(l), model.min_lifetime, model.max_lifetime));
  }
  return out;
}

nlohmann::json DiurnalStream::to_json() const {
  return {{"days", days},
          {"posts_per_hour", posts_per_hour},
          {"kappa", kappa},
          {"peak_hour", peak_hour},
          {"fitness_tail", fitness_tail},
          {"comment_rate", comment_rate},
          {"decay_hours", decay_hours},
          {"activity_floor", activity_floor},
          {"horizon_hours", horizon_hours},
          {"slot_seconds", slot_seconds},
          {"origin", origin}};
}

std::vector<EventRecord> diurnal_events(const DiurnalStream& p, std::uint64_t seed) {
  if (p.days < 1 || p.slot_seconds < 1 || p.horizon_hours < 1 || !(p.posts_per_hour > 0) ||
      !(p.kappa >= 0) || !(p.fitness_tail > 0) || !(p.comment_rate > 0) ||
      !(p.decay_hours > 0) || !(p.activity_floor >= 0 && p.activity_floor <= 1)) {
    throw ValidationError("invalid diurnal stream parameters");
  }
  const double two_pi = 2 * std::numbers::pi;
  auto shape = [&](double h) {
    return std::exp(p.kappa * (std::cos(two_pi * (h - p.peak_hour) / 24) - 1));
  };
  // Mean of the day shape, by a fine Riemann sum over one period.
  double norm = 0;
  constexpr int kSteps = 10000;
  for (int i = 0; i < kSteps; ++i) norm += shape(24.0 * i / kSteps);
  norm /= kSteps;

  Engine rng(seed);
  boost::random::uniform_01<double> unit;
  const double hours = 24.0 * p.days;
  const double slot_h = p.slot_seconds / 3600.0;
  const auto n_slots = static_cast<std::int64_t>(hours / slot_h);
  const auto horizon_slots = static_cast<std::int64_t>(p.horizon_hours / slot_h);

  // Thinned homogeneous process: candidates at rate max(shape)/norm = 1/norm.
  boost::random::poisson_distribution<std::int64_t, double> candidates(p.posts_per_hour *
                                                                       hours / norm);
  const std::int64_t n_candidates = candidates(rng);
  std::vector<double> arrivals;
  for (std::int64_t i = 0; i < n_candidates; ++i) {
    const double t = unit(rng) * hours;
    if (unit(rng) < shape(t)) arrivals.push_back(t);
  }
  std::sort(arrivals.begin(), arrivals.end());

  std::vector<double> activity(static_cast<std::size_t>(n_slots));
  for (std::int64_t s = 0; s < n_slots; ++s) {
    const double mid = (static_cast<double>(s) + 0.5) * slot_h;
    activity[static_cast<std::size_t>(s)] =
        p.activity_floor + (1 - p.activity_floor) * shape(mid) / norm;
  }

  struct Hit {
    std::int64_t slot;
    std::size_t post;
    std::int64_t count;
  };
  std::vector<Hit> hits;
  for (std::size_t post = 0; post < arrivals.size(); ++post) {
    const double born = arrivals[post];
    const double fitness = std::pow(1 - unit(rng), -1 / p.fitness_tail);
    const auto first = static_cast<std::int64_t>(born / slot_h);
    const std::int64_t last = std::min(n_slots, first + horizon_slots);
    for (std::int64_t s = first; s < last; ++s) {
      const double mid = (static_cast<double>(s) + 0.5) * slot_h;
      const double age = std::max(0.0, mid - born);
      const double rate = p.comment_rate * fitness * std::exp(-age / p.decay_hours) *
                          activity[static_cast<std::size_t>(s)] * slot_h;
      const auto c = boost::random::poisson_distribution<std::int64_t, double>(rate)(rng);
      if (c > 0) hits.push_back({s, post, c});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.slot != b.slot ? a.slot < b.slot : a.post < b.post;
  });

  std::vector<EventRecord> events;
  events.reserve(hits.size());
  char name[32];
  for (const auto& h : hits) {
    std::snprintf(name, sizeof name, "post%06zu", h.post);
    events.push_back({name, p.origin + h.slot * p.slot_seconds, h.count});
  }
  return events;
}

}  // namespace chartdyn
