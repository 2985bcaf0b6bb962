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

#ifndef MINENT_ENTROPY_HPP
#define MINENT_ENTROPY_HPP

#include <utility>
#include <vector>

#include "minent/geometry.hpp"

namespace minent {

/// n + d - 2; ConfigError for invalid (n, d).
int factor_entropy(int n, int d);

/// sqrt(sum (h_i / beta_i)^2).
double product_entropy(const ScaledProductMetric& metric);

struct OptimalScales {
  std::vector<double> alpha;
  double h_min = 0.0;
};

/// Closed-form entropy minimizer among unit-volume scalings.
OptimalScales optimal_scales(const std::vector<FactorSpec>& factors);
/// g_min, carrying its centroid weights.
ScaledProductMetric minimal_entropy_metric(const std::vector<FactorSpec>& factors);

struct NumericOptimum {
  std::vector<double> beta;
  double h = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// Newton iteration on the KKT system of min h(g_beta)^2 subject to
/// sum n_i log beta_i = 0, in the log coordinates u_i = log beta_i.
/// Nonconvergence after `max_iterations`.
NumericOptimum numeric_optimal_scales(const std::vector<FactorSpec>& factors, double tol = 1e-13,
                                      int max_iterations = 200);

struct EntropyReport {
  double h = 0.0;
  double vol = 0.0;
  double ent = 0.0;
  int n = 0;
};

/// Entropy, volume and normalized entropy of g_beta on a quotient whose
/// unscaled volume is `base_volume`.
EntropyReport entropy_report(const ScaledProductMetric& metric, double base_volume = 1.0);

/// log of the area of the metric sphere of radius t, real factors only.
double log_sphere_area(const ScaledProductMetric& metric, double t, int angular_nodes = 48);

struct CriticalExponentOptions {
  double radius = 60.0;
  double tolerance = 0.02;
  int angular_nodes = 0;  // 0 picks a default by rank
};

/// Bisection on s for divergence of int_0^R e^{-s t} vol(S(y, t)) dt. The
/// integral is declared divergent when its second half outweighs its first.
/// BracketError if the bracket does not straddle the transition.
double critical_exponent_estimate(const ScaledProductMetric& metric, const ProductPoint& y,
                                  std::pair<double, double> s_bracket,
                                  const CriticalExponentOptions& options = {});

}  // namespace minent

#endif  // MINENT_ENTROPY_HPP
