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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chartdyn/error.hpp"

namespace chartdyn {
namespace {

double gaussian_entropy(double var) {
  return 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * var);
}

TEST(Quadrature, TrapezoidWeights) {
  const std::vector<double> g = {0, 1, 3};
  EXPECT_EQ(trapezoid_weights(g), (std::vector<double>{0.5, 1.5, 1.0}));
  EXPECT_DOUBLE_EQ(trapezoid(g, std::vector<double>{2, 2, 2}), 6.0);
  EXPECT_THROW(uniform_grid(1, 1, 5), ValidationError);
  const auto u = uniform_grid(-1, 1, 5);
  EXPECT_DOUBLE_EQ(u[1], -0.5);
  EXPECT_DOUBLE_EQ(u.back(), 1.0);
}

TEST(Entropy, UniformIsLogWidth) {
  for (double width : {0.25, 1.0, 17.0}) {
    const auto g = uniform_grid(3, 3 + width, 101);
    const auto p = normalize(g, std::vector<double>(g.size(), 1.0));
    EXPECT_NEAR(entropy(p), std::log(width), 1e-12);
  }
}

TEST(Entropy, SinglePointMassOnGrid) {
  // Only one nonzero node: weight h, value 1/h.
  const auto g = uniform_grid(0, 1, 1001);
  std::vector<double> v(g.size(), 0.0);
  v[500] = 1.0;
  const double h = g[1] - g[0];
  EXPECT_NEAR(entropy(normalize(g, v)), std::log(h), 1e-12);
}

TEST(Entropy, GaussianOnDefaultGrid) {
  for (double var : {0.01, 1.0, 40.0}) {
    const MomentConstraints c{-1.7 / var, 1 / (2 * var)};
    const auto p = gaussian_maximizer(c, gaussian_grid(c.mean(), std::sqrt(var)));
    EXPECT_NEAR(entropy(p), gaussian_entropy(var), 1e-9);
  }
}

TEST(Entropy, RejectsUnnormalized) {
  DiscreteDensity p{{0, 1}, {2, 2}};
  EXPECT_THROW(entropy(p), ValidationError);
  EXPECT_THROW(normalize({0, 1}, {0, 0}), ValidationError);
  EXPECT_THROW(normalize({0, 0}, {1, 1}), ValidationError);
}

TEST(Objective, ZeroMultipliersGiveEntropy) {
  const auto g = uniform_grid(-2, 5, 301);
  std::vector<double> v;
  for (double s : g) v.push_back(1 + std::sin(s) * 0.5);
  const auto p = normalize(g, v);
  EXPECT_DOUBLE_EQ(objective_phi(p, {0, 0}), entropy(p));
}

// Kullback-Leibler divergence with the same quadrature.
double kl(const DiscreteDensity& q, const DiscreteDensity& p) {
  const auto w = trapezoid_weights(q.grid);
  double d = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (q.values[i] > 0) d += w[i] * q.values[i] * std::log(q.values[i] / p.values[i]);
  }
  return d;
}

TEST(Maximizer, BeatsPerturbationsByExactlyKl) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int pair = 0; pair < 10; ++pair) {
    const double var = std::exp(2 * u(rng));
    const MomentConstraints c{u(rng) * 3 / var, 1 / (2 * var)};
    const auto grid = gaussian_grid(c.mean(), std::sqrt(var), 1024);
    const auto p = gaussian_maximizer(c, grid);
    const double best = objective_phi(p, c);
    for (int k = 0; k < 20; ++k) {
      const double eps = 0.3 * std::abs(u(rng));
      const double freq = 1 + 5 * std::abs(u(rng));
      std::vector<double> v = p.values;
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] *= 1 + eps * std::sin(freq * (grid[i] - c.mean()));
      }
      const auto q = normalize(grid, v);
      const double phi = objective_phi(q, c);
      EXPECT_LT(phi, best);
      EXPECT_NEAR(best - phi, kl(q, p), 1e-10);
    }
  }
}

TEST(Maximizer, MomentsMatchMultipliers) {
  for (const MomentConstraints c : {MomentConstraints{0, 0.5}, MomentConstraints{1, 0.5},
                                    MomentConstraints{-4, 2}}) {
    const auto p = gaussian_maximizer(c, gaussian_grid(c.mean(), std::sqrt(c.variance())));
    const double m = expectation(p, [](double s) { return s; });
    const double v = expectation(p, [m](double s) { return (s - m) * (s - m); });
    EXPECT_NEAR(m, c.mean(), 1e-6);
    EXPECT_NEAR(v, c.variance(), 1e-6);
  }
  EXPECT_DOUBLE_EQ((MomentConstraints{1, 0.5}).mean(), -1.0);
}

TEST(Maximizer, NonPositiveBIsRejected) {
  const auto g = uniform_grid(0, 1, 10);
  EXPECT_THROW(gaussian_maximizer({1, 0}, g), ValidationError);
  EXPECT_THROW(gaussian_maximizer({1, -0.3}, g), ValidationError);
}

TEST(PushForward, GaussianBecomesLogNormal) {
  const double m = 1.2, var = 0.5;
  const MomentConstraints c{-m / var, 1 / (2 * var)};
  const auto p = gaussian_maximizer(c, gaussian_grid(m, std::sqrt(var)));
  const auto l = push_to_lifetime(p);
  EXPECT_NEAR(trapezoid(l.lifetimes, l.values), 1.0, 1e-12);
  double peak = 0;
  for (double v : l.values) peak = std::max(peak, v);
  for (std::size_t i = 0; i < l.values.size(); ++i) {
    const double x = l.lifetimes[i];
    const double pdf = std::exp(-std::pow(std::log(x) - m, 2) / (2 * var)) /
                       (x * std::sqrt(2 * std::numbers::pi * var));
    if (pdf > 1e-3 * peak) {
      EXPECT_NEAR(l.values[i] / pdf, 1.0, 1e-4) << x;
    }
  }
}

TEST(PushForward, ExponentialInLogIsPowerLaw) {
  const double a = 0.7;
  const auto g = uniform_grid(0, 6, 2001);
  std::vector<double> v;
  for (double s : g) v.push_back(std::exp(-a * s));
  const auto l = push_to_lifetime(normalize(g, v));
  for (std::size_t i = 100; i + 100 < l.values.size(); i += 250) {
    const double slope = (std::log(l.values[i + 100]) - std::log(l.values[i])) /
                         (std::log(l.lifetimes[i + 100]) - std::log(l.lifetimes[i]));
    EXPECT_NEAR(slope, -(a + 1), 1e-10);
  }
}

TEST(PushForward, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 2);
  for (int rep = 0; rep < 20; ++rep) {
    const double var = u(rng);
    const MomentConstraints c{u(rng) / var, 1 / (2 * var)};
    const auto p = gaussian_maximizer(c, gaussian_grid(c.mean(), std::sqrt(var), 512));
    const auto back = pull_to_log(push_to_lifetime(p));
    ASSERT_EQ(back.grid.size(), p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      EXPECT_NEAR(back.grid[i], p.grid[i], 1e-12 * (1 + std::abs(p.grid[i])));
      EXPECT_NEAR(back.values[i], p.values[i], 1e-8);
    }
  }
}

TEST(Refinement, EntropyConvergesMonotonically) {
  const MomentConstraints c{0.3, 0.8};
  const auto sweep = entropy_refinement_sweep(c, 9, 7);
  ASSERT_EQ(sweep.size(), 7u);
  EXPECT_EQ(sweep[1].points, 17u);
  EXPECT_NEAR(sweep[1].spacing, sweep[0].spacing / 2, 1e-15);
  for (std::size_t k = 2; k < sweep.size(); ++k) {
    if (sweep[k - 1].change > 1e-12) {
      EXPECT_LE(sweep[k].change, sweep[k - 1].change);
    }
  }
  EXPECT_LT(sweep.back().change, 1e-6);
  EXPECT_NEAR(sweep.back().entropy, gaussian_entropy(c.variance()), 1e-9);
}

TEST(TheoryChecks, AllPassAndFaultIsCaught) {
  TheoryCheckOptions o;
  o.constraint_pairs = 5;
  o.perturbations = 20;
  const auto checks = run_theory_checks(o);
  ASSERT_EQ(checks.size(), 5u);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;

  o.inject_fault = true;
  bool maximizer_failed = false;
  for (const auto& c : run_theory_checks(o)) {
    if (c.name == "maximizer") maximizer_failed = !c.passed;
  }
  EXPECT_TRUE(maximizer_failed);
}

}  // namespace
}  // namespace chartdyn
