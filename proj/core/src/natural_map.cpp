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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minent/barycenter.hpp"
#include "minent/entropy.hpp"
#include "minent/errors.hpp"

namespace minent {

NaturalMapResult natural_map(const ScaledProductMetric& g_beta, const ProductPoint& y, double s,
                             const NaturalMapConfig& config) {
  require_real(g_beta);
  check_shape(g_beta, y);
  const ScaledProductMetric target = config.target ? *config.target : minimal_entropy_metric(g_beta.factors());
  if (target.factors() != g_beta.factors()) {
    throw ShapeError("target metric lives on a different product");
  }
  const AtomicInteriorMeasure mu = sample_mu(g_beta, y, s, config.n_z, config.seed, config.frame);
  NaturalMapResult out;
  out.ess = mu.ess;
  out.warnings = mu.warnings;
  const ProductPoint& init = config.init ? *config.init : y;
  if (config.inner == InnerAverage::Exact) {
    out.barycenter = barycenter(ConvolvedObjective(target, mu, config.basepoint), init, config.solver);
  } else {
    const AtomicBoundaryMeasure sigma = convolve_sigma(mu, config.n_theta, config.seed, config.frame);
    out.barycenter = barycenter(AtomicObjective(target, sigma, config.basepoint), init, config.solver);
  }
  return out;
}

JacobianReport jacobian_fd(const ScaledProductMetric& g_beta, const ProductPoint& y, double s, double eps,
                           const NaturalMapConfig& config, double bound_tolerance) {
  if (!(eps > 0.0)) {
    throw ConfigError("finite-difference step must be positive");
  }
  const ScaledProductMetric target = config.target ? *config.target : minimal_entropy_metric(g_beta.factors());
  const int n = g_beta.dimension();
  const int center_index = 2 * n;

  auto solve = [&](const ProductPoint& point, int index, double& ess_min) {
    try {
      NaturalMapConfig cfg = config;
      cfg.target = target;
      cfg.init.reset();
      const NaturalMapResult r = natural_map(g_beta, point, s, cfg);
      ess_min = std::min(ess_min, r.ess);
      return r.barycenter.point;
    } catch (const ParameterError&) {
      throw;
    } catch (const Error& e) {
      throw StencilFailure(index, e.what());
    }
  };

  JacobianReport report;
  report.ess_min = std::numeric_limits<double>::infinity();
  report.image = solve(y, center_index, report.ess_min);
  report.differential = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e(j) = eps;
    const ProductPoint plus = solve(exp_orthonormal(g_beta, y, e), 2 * j, report.ess_min);
    const ProductPoint minus = solve(exp_orthonormal(g_beta, y, -e), 2 * j + 1, report.ess_min);
    report.differential.col(j) =
        (log_orthonormal(target, report.image, plus) - log_orthonormal(target, report.image, minus)) / (2.0 * eps);
  }
  report.jac_det = report.differential.determinant();
  const double h_min = optimal_scales(g_beta.factors()).h_min;
  report.bound = std::pow(s / h_min, n);
  report.ratio = std::abs(report.jac_det) / report.bound;
  report.violation = std::abs(report.jac_det) > report.bound * (1.0 + bound_tolerance);
  const Mat gram = report.differential.transpose() * report.differential;
  const double scale = std::pow(std::abs(report.jac_det), 2.0 / n);
  report.homothety_deviation = (gram - scale * Mat::Identity(n, n)).norm();
  return report;
}

}  // namespace minent
