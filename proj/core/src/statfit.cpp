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

#include "chartdyn/statfit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "chartdyn/error.hpp"
#include "chartdyn/text.hpp"

namespace chartdyn {

BinnedDensity BinnedDensity::rescaled(double factor) const {
  if (!(factor > 0)) throw ValidationError("rescale factor must be positive");
  BinnedDensity out = *this;
  for (auto& e : out.edges) e *= factor;
  for (auto& c : out.centers) c *= factor;
  for (auto& d : out.density) d /= factor;
  return out;
}

std::string BinnedDensity::to_tsv() const {
  std::ostringstream out;
  out << "lo\thi\tcenter\tcount\tdensity\n";
  for (std::size_t i = 0; i < size(); ++i) {
    out << format_double(edges[i]) << '\t' << format_double(edges[i + 1]) << '\t'
        << format_double(centers[i]) << '\t' << counts[i] << '\t'
        << format_double(density[i]) << '\n';
  }
  return out.str();
}

BinnedDensity adaptive_bin(std::span<const double> samples, std::size_t min_count) {
  if (min_count < 1) throw ValidationError("N_min must be >= 1");
  if (samples.size() < min_count) {
    throw ValidationError("adaptive binning needs at least " +
                          std::to_string(min_count) + " samples, got " +
                          std::to_string(samples.size()));
  }
  std::vector<double> x(samples.begin(), samples.end());
  for (double v : x) {
    if (!std::isfinite(v) || v < 1) {
      throw ValidationError("lifetimes must be finite and >= 1");
    }
  }
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();

  // Bin boundaries as sample indices [begin, end).
  std::vector<std::size_t> ends;
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + min_count;
    while (end < n && x[end] == x[end - 1]) ++end;
    if (n - end < min_count) end = n;
    ends.push_back(end);
    begin = end;
  }

  BinnedDensity out;
  out.total = n;
  out.edges.push_back(x.front() - 0.5);
  begin = 0;
  for (std::size_t b = 0; b < ends.size(); ++b) {
    const std::size_t end = ends[b];
    out.counts.push_back(end - begin);
    out.edges.push_back(end < n ? 0.5 * (x[end - 1] + x[end]) : x.back() + 0.5);
    begin = end;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.centers.push_back(std::sqrt(out.edges[i] * out.edges[i + 1]));
    out.density.push_back(static_cast<double>(out.counts[i]) /
                          (static_cast<double>(n) * out.width(i)));
  }
  return out;
}

std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "uniform") return Weighting::kUniform;
  if (name == "count") return Weighting::kCount;
  return std::nullopt;
}

std::string_view weighting_name(Weighting w) {
  return w == Weighting::kUniform ? "uniform" : "count";
}

namespace {

struct FitPoint {
  double center;
  double density;
  double count;
};

MaxEntFit fit_points(const std::vector<FitPoint>& pts, Weighting weighting) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (n < 4) {
    throw ValidationError("fit needs at least 4 bins, got " + std::to_string(n));
  }
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    if (!(p.density > 0) || !(p.center > 0)) {
      throw ValidationError("fit needs positive densities and centers");
    }
    const double lx = std::log(p.center);
    X(i, 0) = 1.0;
    X(i, 1) = -lx;
    X(i, 2) = -lx * lx;
    y(i) = std::log(p.density);
    w(i) = weighting == Weighting::kCount ? p.count : 1.0;
  }

  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd Xw = sw.asDiagonal() * X;
  const Eigen::VectorXd yw = sw.asDiagonal() * y;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
  qr.setThreshold(1e-12);
  if (qr.rank() < 3) {
    throw NumericalError("singular design matrix: bin centers do not span a quadratic");
  }
  const Eigen::Vector3d beta = qr.solve(yw);
  const Eigen::VectorXd resid = yw - Xw * beta;

  MaxEntFit fit;
  fit.c0 = beta(0);
  fit.a_plus_1 = beta(1);
  fit.b = beta(2);
  fit.n_bins = static_cast<std::size_t>(n);
  fit.residual_ss = resid.squaredNorm();

  const double dof = static_cast<double>(n - 3);
  const double s2 = fit.residual_ss / dof;
  const Eigen::Matrix3d cov = s2 * (Xw.transpose() * Xw).inverse();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) fit.covariance[r][c] = 0.5 * (cov(r, c) + cov(c, r));
  }

  boost::math::students_t_distribution<double> t_dist(dof);
  const double t = boost::math::quantile(t_dist, 0.975);
  fit.margin_a = t * std::sqrt(std::max(0.0, fit.covariance[1][1]));
  fit.margin_b = t * std::sqrt(std::max(0.0, fit.covariance[2][2]));
  return fit;
}

}  // namespace

MaxEntFit fit_maxent(const BinnedDensity& density, Weighting weighting) {
  std::vector<FitPoint> pts;
  pts.reserve(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    pts.push_back({density.centers[i], density.density[i],
                   static_cast<double>(density.counts[i])});
  }
  return fit_points(pts, weighting);
}

std::pair<MaxEntFit, MaxEntFit> fit_split(const BinnedDensity& density,
                                          double split_at, Weighting weighting) {
  std::vector<FitPoint> lower;
  std::vector<FitPoint> upper;
  for (std::size_t i = 0; i < density.size(); ++i) {
    FitPoint p{density.centers[i], density.density[i],
               static_cast<double>(density.counts[i])};
    (density.centers[i] <= split_at ? lower : upper).push_back(p);
  }
  if (lower.size() < 4 || upper.size() < 4) {
    throw ValidationError("split at " + format_double(split_at) + " leaves " +
                          std::to_string(lower.size()) + " and " +
                          std::to_string(upper.size()) +
                          " bins; each side needs at least 4");
  }
  return {fit_points(lower, weighting), fit_points(upper, weighting)};
}

std::string_view shape_name(Shape shape) {
  switch (shape) {
    case Shape::kLogNormal: return "log_normal";
    case Shape::kPowerLaw: return "power_law";
    case Shape::kConcaveExcess: return "concave_excess";
  }
  return "unknown";
}

DerivedParams derive_params(double a_plus_1, double b, double tolerance) {
  DerivedParams d;
  if (b > tolerance) {
    d.shape = Shape::kLogNormal;
    d.log_mean = -a_plus_1 / (2.0 * b);
    d.log_var = 1.0 / (2.0 * b);
  } else if (b < -tolerance) {
    d.shape = Shape::kConcaveExcess;
  } else {
    d.shape = Shape::kPowerLaw;
  }
  return d;
}

DerivedParams derive_params(const MaxEntFit& fit) {
  return derive_params(fit.a_plus_1, fit.b, fit.margin_b);
}

ModelParams params_from_log_moments(double log_mean, double log_var, double c0) {
  if (!(log_var > 0)) throw ValidationError("log variance must be positive");
  const double b = 1.0 / (2.0 * log_var);
  return {-2.0 * b * log_mean, b, c0};
}

double model_density(const ModelParams& params, double lifetime) {
  if (!(lifetime > 0)) throw ValidationError("lifetime must be positive");
  const double s = std::log(lifetime);
  return std::exp(params.c0 - params.a_plus_1 * s - params.b * s * s);
}

nlohmann::json fit_report(const MaxEntFit& fit) {
  const DerivedParams d = derive_params(fit);
  nlohmann::json j = {
      {"a_plus_1", fit.a_plus_1},
      {"b", fit.b},
      {"c0", fit.c0},
      {"margin_a", fit.margin_a},
      {"margin_b", fit.margin_b},
      {"n_bins", fit.n_bins},
      {"residual_ss", fit.residual_ss},
      {"classification", shape_name(d.shape)},
  };
  if (d.log_mean) j["mu_tilde"] = *d.log_mean;
  if (d.log_var) j["sigma2_tilde"] = *d.log_var;
  return j;
}

std::string plot_tsv(const BinnedDensity& density, const ModelParams& params) {
  std::ostringstream out;
  out << "ln_L\tln_density\tln_model\n";
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double lx = std::log(density.centers[i]);
    out << format_double(lx) << '\t' << format_double(std::log(density.density[i]))
        << '\t' << format_double(params.c0 - params.a_plus_1 * lx - params.b * lx * lx)
        << '\n';
  }
  return out.str();
}

}  // namespace chartdyn
