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

// Maximum-entropy utilities on bounded grids.
//
// A density on the log-scale variable s is stored by its values at the grid
// points; integrals use the trapezoid rule on that grid. Under this
// quadrature the density proportional to exp(-a s - b s^2) maximizes
//
//   Phi[p] = H[p] - a <s> - b <s^2>,   H[p] = -<ln p>,
//
// exactly, because Phi[q] = ln Z - KL(q || p) for every normalized q.

#ifndef CHARTDYN_MAXENT_HPP_
#define CHARTDYN_MAXENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chartdyn {

struct DiscreteDensity {
  std::vector<double> grid;    // strictly increasing s_i
  std::vector<double> values;  // p(s_i) >= 0, trapezoid integral 1
};

// Lagrange multipliers on <s> and <s^2>.
struct MomentConstraints {
  double a = 0;
  double b = 0;

  double mean() const { return -a / (2 * b); }
  double variance() const { return 1 / (2 * b); }
};

std::vector<double> trapezoid_weights(std::span<const double> grid);

double trapezoid(std::span<const double> grid, std::span<const double> values);

// `points` evenly spaced values covering [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

// Default theory grid: mean +- 8 sd with 4096 points.
std::vector<double> gaussian_grid(double mean, double sd, std::size_t points = 4096,
                                  double half_width_sds = 8);

// Rescales non-negative values to unit trapezoid mass.
DiscreteDensity normalize(std::vector<double> grid, std::vector<double> values);

double total_mass(const DiscreteDensity& p);

// <f(s)> under p.
double expectation(const DiscreteDensity& p, const std::function<double(double)>& f);

// Shannon entropy in nats; points with zero density contribute nothing.
// Throws ValidationError unless the mass is 1 within 1e-10.
double entropy(const DiscreteDensity& p);

double objective_phi(const DiscreteDensity& p, const MomentConstraints& c);

// exp(-a s - b s^2) normalized on the grid. ValidationError for b <= 0.
DiscreteDensity gaussian_maximizer(const MomentConstraints& c,
                                   std::span<const double> grid);

struct LifetimeDensity {
  std::vector<double> lifetimes;  // L_i = exp(s_i)
  std::vector<double> values;     // p(L_i), trapezoid integral over L is 1
};

// p(L) = p(s) / L at L = exp(s), renormalized on the lifetime grid.
LifetimeDensity push_to_lifetime(const DiscreteDensity& p_s);

// Inverse change of variables: p(s) = p(L) L, renormalized on the s grid.
DiscreteDensity pull_to_log(const LifetimeDensity& p_l);

struct TheoryCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TheoryCheckOptions {
  std::uint64_t seed = 20240601;
  std::size_t constraint_pairs = 50;
  std::size_t perturbations = 100;
  double tolerance = 1e-8;
  // Negative control: hands the maximizer check a distorted Gaussian.
  bool inject_fault = false;
};

// Entropy, maximizer, moment, push-forward and grid-refinement checks.
std::vector<TheoryCheck> run_theory_checks(const TheoryCheckOptions& options);

struct RefinementStep {
  std::size_t points = 0;
  double spacing = 0;
  double entropy = 0;
  double change = 0;  // |H(this) - H(previous)|, 0 for the first step
};

// Entropy of N(mean, var) on successively halved grid spacings.
std::vector<RefinementStep> entropy_refinement_sweep(const MomentConstraints& c,
                                                     std::size_t start_points,
                                                     std::size_t steps);

}  // namespace chartdyn

#endif  // CHARTDYN_MAXENT_HPP_
