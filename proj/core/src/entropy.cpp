// Copyright 2026 The minent Authors
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

#include "minent/entropy.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "minent/errors.hpp"

namespace minent {

int factor_entropy(int n, int d) { return FactorSpec(n, d).h(); }

double product_entropy(const ScaledProductMetric& metric) { return metric.entropy(); }

OptimalScales optimal_scales(const std::vector<FactorSpec>& factors) {
  if (factors.empty()) {
    throw ConfigError("at least one factor is required");
  }
  int n = 0;
  for (const auto& f : factors) {
    n += f.n;
  }
  // log prod (sqrt(n_j) / h_j)^{n_j / n}
  double log_prod = 0.0;
  for (const auto& f : factors) {
    log_prod += (f.n / static_cast<double>(n)) * (0.5 * std::log(f.n) - std::log(f.h()));
  }
  OptimalScales out;
  for (const auto& f : factors) {
    out.alpha.push_back(f.h() / std::sqrt(static_cast<double>(f.n)) * std::exp(log_prod));
  }
  out.h_min = std::sqrt(static_cast<double>(n)) * std::exp(-log_prod);
  return out;
}

ScaledProductMetric minimal_entropy_metric(const std::vector<FactorSpec>& factors) {
  return {factors, optimal_scales(factors).alpha};
}

NumericOptimum numeric_optimal_scales(const std::vector<FactorSpec>& factors, double tol,
                                      int max_iterations) {
  if (factors.empty()) {
    throw ConfigError("at least one factor is required");
  }
  if (!(tol > 0.0)) {
    throw ConfigError("tolerance must be positive");
  }
  const auto k = static_cast<Eigen::Index>(factors.size());
  Vec h2(k);
  Vec dims(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    h2(i) = static_cast<double>(factors[i].h()) * factors[i].h();
    dims(i) = factors[i].n;
  }
  auto objective = [&](const Vec& u) { return (h2.array() * (-2.0 * u.array()).exp()).sum(); };
  auto residual = [&](const Vec& grad, double f) {
    const Vec proj = grad - (dims.dot(grad) / dims.squaredNorm()) * dims;
    return proj.norm() / f;
  };

  Vec u = Vec::Zero(k);
  NumericOptimum out;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Vec e = (-2.0 * u.array()).exp();
    const double f = objective(u);
    const Vec grad = -2.0 * (h2.array() * e.array()).matrix();
    out.kkt_residual = residual(grad, f);
    out.iterations = iter;
    if (out.kkt_residual < tol) {
      break;
    }
    Mat kkt = Mat::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = (4.0 * (h2.array() * e.array())).matrix().asDiagonal();
    kkt.block(0, k, k, 1) = dims;
    kkt.block(k, 0, 1, k) = dims.transpose();
    Vec rhs(k + 1);
    rhs.head(k) = -grad;
    rhs(k) = -dims.dot(u);
    const Vec sol = kkt.fullPivLu().solve(rhs);
    Vec step = sol.head(k);
    double t = 1.0;
    while (objective(u + t * step) > f + 1e-4 * t * grad.dot(step) && t > 1e-12) {
      t *= 0.5;
    }
    u += t * step;
    if (iter + 1 == max_iterations) {
      throw Nonconvergence("numeric_optimal_scales: no convergence after " +
                           std::to_string(max_iterations) + " iterations");
    }
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    out.beta.push_back(std::exp(u(i)));
  }
  out.h = std::sqrt(objective(u));
  return out;
}

EntropyReport entropy_report(const ScaledProductMetric& metric, double base_volume) {
  if (!(base_volume > 0.0)) {
    throw ConfigError("base volume must be positive");
  }
  EntropyReport r;
  r.n = metric.dimension();
  r.h = metric.entropy();
  double log_vol = std::log(base_volume);
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    log_vol += metric.factor(i).n * std::log(metric.scale(i));
  }
  r.vol = std::exp(log_vol);
  r.ent = std::pow(r.h, r.n) * r.vol;
  return r;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sinh(double x) {
  if (x > 20.0) {
    return x - std::numbers::ln2;
  }
  return std::log(std::sinh(x));
}

/// log of the area of the unit sphere S^{m}.
double log_unit_sphere(int m) {
  const double half = 0.5 * (m + 1);
  return std::log(2.0) + half * std::log(std::numbers::pi) - std::lgamma(half);
}

/// Tensor Gauss-Legendre rule on the positive orthant of S^{k-1}, in
/// hyperspherical angles. Each node stores its unit vector and log weight.
struct OrthantRule {
  std::vector<Vec> directions;
  std::vector<double> log_weights;
};

OrthantRule orthant_rule(int k, int panels) {
  using Gauss = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> nodes;
  std::vector<double> weights;
  const double width = 0.5 * std::numbers::pi / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    const auto& abscissa = Gauss::abscissa();
    const auto& w = Gauss::weights();
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      for (int sign : {-1, 1}) {
        if (abscissa[j] == 0.0 && sign < 0) {
          continue;
        }
        nodes.push_back(mid + sign * 0.5 * width * abscissa[j]);
        weights.push_back(0.5 * width * w[j]);
      }
    }
  }

  OrthantRule rule;
  if (k == 1) {
    rule.directions.push_back(Vec::Ones(1));
    rule.log_weights.push_back(0.0);
    return rule;
  }
  const int dims = k - 1;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  for (;;) {
    Vec u(k);
    double log_w = 0.0;
    double sin_prod = 1.0;
    for (int j = 0; j < dims; ++j) {
      const double phi = nodes[idx[j]];
      u(j) = sin_prod * std::cos(phi);
      sin_prod *= std::sin(phi);
      log_w += std::log(weights[idx[j]]) + (k - 2 - j) * std::log(std::sin(phi));
    }
    u(k - 1) = sin_prod;
    rule.directions.push_back(std::move(u));
    rule.log_weights.push_back(log_w);
    int j = 0;
    while (j < dims && ++idx[j] == nodes.size()) {
      idx[j] = 0;
      ++j;
    }
    if (j == dims) {
      break;
    }
  }
  return rule;
}

int default_panels(std::size_t k) {
  switch (k) {
    case 1:
    case 2:
      return 4;
    case 3:
      return 2;
    default:
      return 1;
  }
}

double log_sphere_area_with(const ScaledProductMetric& metric, const OrthantRule& rule, double t) {
  if (t <= 0.0) {
    return kNegInf;
  }
  const std::size_t k = metric.rank();
  double constant = (static_cast<double>(k) - 1.0) * std::log(t);
  for (std::size_t i = 0; i < k; ++i) {
    const int m = metric.factor(i).n - 1;
    constant += log_unit_sphere(m) + m * std::log(metric.scale(i));
  }
  double max_term = kNegInf;
  std::vector<double> terms(rule.directions.size());
  for (std::size_t q = 0; q < rule.directions.size(); ++q) {
    double term = rule.log_weights[q];
    for (std::size_t i = 0; i < k; ++i) {
      const int m = metric.factor(i).n - 1;
      term += m * log_sinh(t * rule.directions[q](static_cast<Eigen::Index>(i)) / metric.scale(i));
    }
    terms[q] = term;
    max_term = std::max(max_term, term);
  }
  double sum = 0.0;
  for (double term : terms) {
    sum += std::exp(term - max_term);
  }
  return constant + max_term + std::log(sum);
}

}  // namespace

double log_sphere_area(const ScaledProductMetric& metric, double t, int angular_nodes) {
  require_real(metric);
  const int panels = std::max(1, angular_nodes / 30);
  return log_sphere_area_with(metric, orthant_rule(static_cast<int>(metric.rank()), panels), t);
}

double critical_exponent_estimate(const ScaledProductMetric& metric, const ProductPoint& y,
                                  std::pair<double, double> s_bracket,
                                  const CriticalExponentOptions& options) {
  require_real(metric);
  check_shape(metric, y);
  auto [lo, hi] = s_bracket;
  if (!(lo < hi) || !(options.radius > 0.0) || !(options.tolerance > 0.0)) {
    throw ConfigError("critical exponent: need lo < hi, positive radius and tolerance");
  }
  const int panels =
      options.angular_nodes > 0 ? std::max(1, options.angular_nodes / 30) : default_panels(metric.rank());
  const OrthantRule rule = orthant_rule(static_cast<int>(metric.rank()), panels);

  // Tabulate log A(t) once on a fine grid; the integrand is then cheap.
  const double radius = options.radius;
  constexpr int kGrid = 4096;
  std::vector<double> log_area(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j) {
    log_area[j] = log_sphere_area_with(metric, rule, radius * j / kGrid);
  }
  auto interp = [&](double t) {
    const double pos = std::clamp(t / radius * kGrid, 0.0, static_cast<double>(kGrid));
    const int j = std::min(static_cast<int>(pos), kGrid - 1);
    const double frac = pos - j;
    if (j == 0) {
      return log_sphere_area_with(metric, rule, t);
    }
    return (1.0 - frac) * log_area[j] + frac * log_area[j + 1];
  };

  auto diverges = [&](double s) {
    double shift = kNegInf;
    for (int j = 1; j <= kGrid; ++j) {
      shift = std::max(shift, log_area[j] - s * radius * j / kGrid);
    }
    auto integrand = [&](double t) {
      const double g = interp(t) - s * t;
      return g == kNegInf ? 0.0 : std::exp(g - shift);
    };
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double first = Kronrod::integrate(integrand, 0.0, 0.5 * radius, 15, 1e-10);
    const double second = Kronrod::integrate(integrand, 0.5 * radius, radius, 15, 1e-10);
    return second > first;
  };

  if (!diverges(lo) || diverges(hi)) {
    throw BracketError("critical exponent bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] does not straddle the transition");
  }
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (diverges(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace minent
