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

#include "chartdyn/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "chartdyn/error.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn {

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (grid[i + 1] - grid[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  double sum = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    sum += 0.5 * (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]);
  }
  return sum;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw ValidationError("grid needs 2+ points and hi > lo");
  std::vector<double> g(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> gaussian_grid(double mean, double sd, std::size_t points,
                                  double half_width_sds) {
  return uniform_grid(mean - half_width_sds * sd, mean + half_width_sds * sd, points);
}

namespace {

void check_grid(std::span<const double> grid, std::size_t n_values) {
  if (grid.size() < 2 || grid.size() != n_values) {
    throw ValidationError("density grid and values must match and hold 2+ points");
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw ValidationError("grid must be strictly increasing");
  }
}

}  // namespace

DiscreteDensity normalize(std::vector<double> grid, std::vector<double> values) {
  check_grid(grid, values.size());
  for (double v : values) {
    if (!(v >= 0) || !std::isfinite(v)) {
      throw ValidationError("density values must be finite and non-negative");
    }
  }
  const double mass = trapezoid(grid, values);
  if (!(mass > 0)) throw ValidationError("density has no mass");
  for (auto& v : values) v /= mass;
  return {std::move(grid), std::move(values)};
}

double total_mass(const DiscreteDensity& p) { return trapezoid(p.grid, p.values); }

double expectation(const DiscreteDensity& p, const std::function<double(double)>& f) {
  const auto w = trapezoid_weights(p.grid);
  double sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * p.values[i] * f(p.grid[i]);
  return sum;
}

double entropy(const DiscreteDensity& p) {
  check_grid(p.grid, p.values.size());
  const double mass = total_mass(p);
  if (std::abs(mass - 1.0) > 1e-10) {
    throw ValidationError("density is not normalized (mass " + format_double(mass) + ")");
  }
  const auto w = trapezoid_weights(p.grid);
  double h = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = p.values[i];
    if (v < 0) throw ValidationError("negative density value");
    if (v > 0) h -= w[i] * v * std::log(v);
  }
  return h;
}

double objective_phi(const DiscreteDensity& p, const MomentConstraints& c) {
  const double h = entropy(p);
  const auto w = trapezoid_weights(p.grid);
  double m1 = 0;
  double m2 = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = p.grid[i];
    m1 += w[i] * p.values[i] * s;
    m2 += w[i] * p.values[i] * s * s;
  }
  return h - c.a * m1 - c.b * m2;
}

DiscreteDensity gaussian_maximizer(const MomentConstraints& c,
                                   std::span<const double> grid) {
  if (!(c.b > 0)) {
    throw ValidationError("b must be positive for a normalizable maximizer");
  }
  // Shift the exponent by its maximum on the grid to avoid overflow.
  std::vector<double> expo(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    expo[i] = -c.a * grid[i] - c.b * grid[i] * grid[i];
  }
  const double top = *std::max_element(expo.begin(), expo.end());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = std::exp(expo[i] - top);
  return normalize(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

LifetimeDensity push_to_lifetime(const DiscreteDensity& p_s) {
  check_grid(p_s.grid, p_s.values.size());
  LifetimeDensity out;
  out.lifetimes.reserve(p_s.grid.size());
  out.values.reserve(p_s.grid.size());
  for (std::size_t i = 0; i < p_s.grid.size(); ++i) {
    const double l = std::exp(p_s.grid[i]);
    out.lifetimes.push_back(l);
    out.values.push_back(p_s.values[i] / l);
  }
  const double mass = trapezoid(out.lifetimes, out.values);
  for (auto& v : out.values) v /= mass;
  return out;
}

DiscreteDensity pull_to_log(const LifetimeDensity& p_l) {
  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(p_l.lifetimes.size());
  values.reserve(p_l.lifetimes.size());
  for (std::size_t i = 0; i < p_l.lifetimes.size(); ++i) {
    if (!(p_l.lifetimes[i] > 0)) throw ValidationError("lifetimes must be positive");
    grid.push_back(std::log(p_l.lifetimes[i]));
    values.push_back(p_l.values[i] * p_l.lifetimes[i]);
  }
  return normalize(std::move(grid), std::move(values));
}

std::vector<RefinementStep> entropy_refinement_sweep(const MomentConstraints& c,
                                                     std::size_t start_points,
                                                     std::size_t steps) {
  std::vector<RefinementStep> out;
  std::size_t points = start_points;
  const double sd = std::sqrt(c.variance());
  for (std::size_t k = 0; k < steps; ++k) {
    const auto grid = gaussian_grid(c.mean(), sd, points);
    RefinementStep step;
    step.points = points;
    step.spacing = grid[1] - grid[0];
    step.entropy = entropy(gaussian_maximizer(c, grid));
    step.change = out.empty() ? 0.0 : std::abs(step.entropy - out.back().entropy);
    out.push_back(step);
    points = 2 * points - 1;  // halves the spacing, keeps the old points
  }
  return out;
}

namespace {

// Smooth multiplicative perturbation with random low-order Fourier modes,
// plus occasional sparse spikes.
DiscreteDensity perturb(const DiscreteDensity& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> modes(1, 6);
  const double lo = p.grid.front();
  const double span = p.grid.back() - lo;
  const double eps = std::pow(10.0, -3.0 + 2.5 * unit(rng));
  const int n_modes = modes(rng);
  std::vector<double> freq(static_cast<std::size_t>(n_modes));
  std::vector<double> phase(freq.size());
  std::vector<double> amp(freq.size());
  for (std::size_t k = 0; k < freq.size(); ++k) {
    freq[k] = (1.0 + 8.0 * unit(rng)) * std::numbers::pi / span;
    phase[k] = 2 * std::numbers::pi * unit(rng);
    amp[k] = 2 * unit(rng) - 1;
  }
  std::vector<double> q(p.values.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double g = 0;
    for (std::size_t k = 0; k < freq.size(); ++k) {
      g += amp[k] * std::sin(freq[k] * (p.grid[i] - lo) + phase[k]);
    }
    q[i] = p.values[i] * std::exp(eps * g);
  }
  if (unit(rng) < 0.3) {
    std::uniform_int_distribution<std::size_t> pick(0, q.size() - 1);
    for (int k = 0; k < 5; ++k) q[pick(rng)] *= 1.0 + unit(rng);
  }
  return normalize(p.grid, std::move(q));
}

}  // namespace

std::vector<TheoryCheck> run_theory_checks(const TheoryCheckOptions& options) {
  std::vector<TheoryCheck> checks;
  std::mt19937_64 rng(options.seed);
  auto fmt = [](double v) { return format_double(v); };

  {
    const MomentConstraints standard{0.0, 0.5};
    const auto p = gaussian_maximizer(standard, gaussian_grid(0, 1));
    const double h = entropy(p);
    const double expected = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e);
    checks.push_back({"entropy_gaussian", std::abs(h - expected) <= 1e-3,
                      "H=" + fmt(h) + " closed form " + fmt(expected)});
  }

  {
    std::uniform_real_distribution<double> a_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> b_dist(0.05, 5.0);
    double worst = -INFINITY;
    std::size_t violations = 0;
    for (std::size_t k = 0; k < options.constraint_pairs; ++k) {
      const MomentConstraints c{a_dist(rng), b_dist(rng)};
      auto grid = gaussian_grid(c.mean(), std::sqrt(c.variance()));
      DiscreteDensity best = gaussian_maximizer(c, grid);
      if (options.inject_fault) {
        for (std::size_t i = 0; i < best.values.size(); ++i) {
          best.values[i] *= 1.0 + 0.2 * std::sin(3.0 * (best.grid[i] - c.mean()));
        }
        best = normalize(std::move(best.grid), std::move(best.values));
      }
      const double phi_best = objective_phi(best, c);
      for (std::size_t j = 0; j < options.perturbations; ++j) {
        const double gap = objective_phi(perturb(best, rng), c) - phi_best;
        worst = std::max(worst, gap);
        if (gap > options.tolerance) ++violations;
      }
    }
    checks.push_back({"maximizer", violations == 0,
                      std::to_string(violations) + " violations, max Phi(q)-Phi(p)=" +
                          fmt(worst)});
  }

  {
    const MomentConstraints c{1.0, 0.5};  // mean -1, variance 1
    const auto p = gaussian_maximizer(c, gaussian_grid(c.mean(), 1.0));
    const double m = expectation(p, [](double s) { return s; });
    const double v = expectation(p, [m](double s) { return (s - m) * (s - m); });
    const bool ok = std::abs(m - c.mean()) <= 1e-6 && std::abs(v - c.variance()) <= 1e-6;
    checks.push_back({"gaussian_moments", ok, "mean=" + fmt(m) + " var=" + fmt(v)});
  }

  {
    const MomentConstraints c{-1.0, 0.5};  // s ~ N(1, 1)
    const auto p = gaussian_maximizer(c, gaussian_grid(c.mean(), 1.0));
    const auto pl = push_to_lifetime(p);
    const double mass = trapezoid(pl.lifetimes, pl.values);
    const auto back = pull_to_log(pl);
    double err = 0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      err = std::max(err, std::abs(back.values[i] - p.values[i]));
    }
    checks.push_back({"push_forward", std::abs(mass - 1) <= 1e-8 && err <= 1e-8,
                      "mass=" + fmt(mass) + " round-trip error=" + fmt(err)});
  }

  {
    // Trapezoid sums of a Gaussian converge very fast, so the sweep starts
    // coarse; changes under kFloor are rounding noise.
    constexpr double kFloor = 1e-12;
    const auto sweep = entropy_refinement_sweep({0.0, 0.5}, 9, 7);
    bool monotone = true;
    for (std::size_t k = 2; k < sweep.size(); ++k) {
      if (sweep[k].change > std::max(sweep[k - 1].change, kFloor)) monotone = false;
    }
    const double last = sweep.back().change;
    checks.push_back({"grid_refinement", monotone && last < 1e-6,
                      "final change " + fmt(last) + (monotone ? ", monotone" : ", not monotone")});
  }
  return checks;
}

}  // namespace chartdyn
