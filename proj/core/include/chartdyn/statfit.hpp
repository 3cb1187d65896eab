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

// Lifetime densities and the generalized log-normal model
//
//   p(L) = exp(c0 - (a+1) ln L - b ln^2 L)
//
// which is a log-normal for b > 0 and a power law L^-(a+1) for b = 0. All
// logarithms are natural.

#ifndef CHARTDYN_STATFIT_HPP_
#define CHARTDYN_STATFIT_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace chartdyn {

// Variable-width histogram. centers are geometric means of adjacent edges;
// density[i] = counts[i] / (total * (edges[i+1] - edges[i])).
struct BinnedDensity {
  std::vector<double> edges;  // B+1, strictly increasing
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  std::vector<double> centers;
  std::vector<double> density;

  std::size_t size() const { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }

  // Same histogram with the lifetime axis scaled by `factor` (for example
  // periods to hours). Densities are divided by `factor`.
  BinnedDensity rescaled(double factor) const;

  // Columns: lo, hi, center, count, density.
  std::string to_tsv() const;
};

// Sorts the samples and grows bins from the smallest value until each holds
// at least min_count samples; equal values never straddle a boundary, and a
// trailing remainder smaller than min_count joins the last bin. Inner edges
// sit halfway between neighbouring values; the outer edges are min - 0.5 and
// max + 0.5. Samples must be finite and >= 1.
BinnedDensity adaptive_bin(std::span<const double> samples, std::size_t min_count);

enum class Weighting { kUniform, kCount };

std::optional<Weighting> parse_weighting(std::string_view name);
std::string_view weighting_name(Weighting w);

struct ModelParams {
  double a_plus_1 = 0;
  double b = 0;
  double c0 = 0;
};

struct MaxEntFit {
  double a_plus_1 = 0;
  double b = 0;
  double c0 = 0;
  double margin_a = 0;  // 95% half-width for a_plus_1
  double margin_b = 0;  // 95% half-width for b
  // Coefficient covariance, order (c0, a_plus_1, b).
  std::array<std::array<double, 3>, 3> covariance{};
  std::size_t n_bins = 0;
  double residual_ss = 0;  // weighted sum of squared log residuals

  ModelParams params() const { return {a_plus_1, b, c0}; }
};

// Least squares of ln(density) on (1, -ln x, -ln^2 x) at the bin centers.
// Margins are t(0.975, n_bins - 3) standard errors. Needs >= 4 bins and
// positive densities (ValidationError); a rank-deficient design throws
// NumericalError.
MaxEntFit fit_maxent(const BinnedDensity& density,
                     Weighting weighting = Weighting::kUniform);

// Bins with center <= split_at go to the first fit, the rest to the second.
std::pair<MaxEntFit, MaxEntFit> fit_split(const BinnedDensity& density,
                                          double split_at,
                                          Weighting weighting = Weighting::kUniform);

enum class Shape { kLogNormal, kPowerLaw, kConcaveExcess };

std::string_view shape_name(Shape shape);

struct DerivedParams {
  Shape shape = Shape::kPowerLaw;
  std::optional<double> log_mean;  // -(a+1)/(2b), log-normal only
  std::optional<double> log_var;   // 1/(2b), log-normal only
};

// |b| <= tolerance reads as a power law.
DerivedParams derive_params(double a_plus_1, double b, double tolerance);

// Uses the fit's own 95% margin on b as the power-law tolerance.
DerivedParams derive_params(const MaxEntFit& fit);

// Inverse of derive_params for the log-normal branch.
ModelParams params_from_log_moments(double log_mean, double log_var, double c0 = 0);

// exp(c0 - (a+1) ln L - b ln^2 L); ValidationError for L <= 0.
double model_density(const ModelParams& params, double lifetime);

// {a_plus_1, b, c0, margin_a, margin_b, n_bins, residual_ss, classification,
//  mu_tilde?, sigma2_tilde?}
nlohmann::json fit_report(const MaxEntFit& fit);

// Per bin: ln_L, ln_density, ln_model.
std::string plot_tsv(const BinnedDensity& density, const ModelParams& params);

}  // namespace chartdyn

#endif  // CHARTDYN_STATFIT_HPP_
