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

#ifndef MINENT_CONFIG_HPP
#define MINENT_CONFIG_HPP

namespace minent {

/// Numeric tolerances shared across modules. Defaults are the values the
/// test and acceptance suites are calibrated against.
struct Tolerances {
  /// Relative tolerance on <x,x> = -1 for hyperboloid points.
  double hyperboloid = 1e-10;
  /// Unit-norm tolerance for boundary directions.
  double unit_direction = 1e-12;
  /// Tolerance on sum(c_i^2) = 1 for centroid weights.
  double centroid_weights = 1e-12;
  /// Slack allowed when a pairing -<x,y> drops below 1 through rounding.
  double pairing_slack = 1e-9;
  /// Gradient-norm tolerance of the barycenter solver, in the target metric.
  double barycenter = 1e-8;
  /// Eigenvalue floor used to regularize Newton steps.
  double hessian_floor = 1e-8;
  /// Smallest Hessian eigenvalue accepted at a solution.
  double degenerate_hessian = 1e-10;
  /// Relative slack on the Jacobian bound before a violation is flagged.
  double jacobian_bound = 0.1;
  /// Absolute bisection tolerance of the critical-exponent estimator.
  double critical_exponent = 0.02;
  /// Outer radius of the ball-volume quadrature.
  double quadrature_radius = 60.0;
  /// ESS fraction under which a sample is flagged as degenerate.
  double ess_fraction = 0.01;
  /// Absolute slack of the determinant inequality checks.
  double functional_slack = 1e-12;
  /// Relative slack of the block-determinant inequality.
  double block_det_slack = 1e-12;
};

/// Process-wide defaults. Never mutated by the library itself.
inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace minent

#endif  // MINENT_CONFIG_HPP
