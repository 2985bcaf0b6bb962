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

#ifndef MINENT_BARYCENTER_HPP
#define MINENT_BARYCENTER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minent/geometry.hpp"
#include "minent/measures.hpp"

namespace minent {

/// Value, gradient and Hessian in orthonormal coordinates of the objective
/// metric at the evaluation point.
struct ObjectiveEval {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

/// x -> int B_0(x, theta) d(sigma)(theta) for some boundary measure sigma.
class BarycenterObjective {
 public:
  virtual ~BarycenterObjective() = default;
  virtual const ScaledProductMetric& metric() const = 0;
  virtual double value(const ProductPoint& x) const = 0;
  virtual ObjectiveEval evaluate(const ProductPoint& x) const = 0;
};

/// Objective of an atomic boundary measure. `basepoint` shifts B_0 by a constant per atom.
class AtomicObjective final : public BarycenterObjective {
 public:
  AtomicObjective(ScaledProductMetric metric, const AtomicBoundaryMeasure& sigma,
                  std::optional<ProductPoint> basepoint = std::nullopt);

  const ScaledProductMetric& metric() const override { return metric_; }
  double value(const ProductPoint& x) const override;
  ObjectiveEval evaluate(const ProductPoint& x) const override;

 private:
  ScaledProductMetric metric_;
  AtomicBoundaryMeasure sigma_;
  std::vector<double> coef_;
  Vec offsets_;  // per-atom basepoint correction
};

/// Objective of the convolution of an interior sample with the
/// Patterson-Sullivan family, with the inner boundary average done in closed
/// form through the radial profile F_n.
class ConvolvedObjective final : public BarycenterObjective {
 public:
  ConvolvedObjective(ScaledProductMetric metric, const AtomicInteriorMeasure& mu,
                     std::optional<ProductPoint> basepoint = std::nullopt);

  const ScaledProductMetric& metric() const override { return metric_; }
  double value(const ProductPoint& x) const override;
  ObjectiveEval evaluate(const ProductPoint& x) const override;

 private:
  ScaledProductMetric metric_;
  AtomicInteriorMeasure mu_;
  std::vector<double> coef_;
  double offset_ = 0.0;
};

/// Objective of sigma at x under `metric` (normally g_min).
ObjectiveEval objective(const ScaledProductMetric& metric, const ProductPoint& x, const AtomicBoundaryMeasure& sigma);

struct BarycenterOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  double hessian_floor = 1e-8;
  double degenerate_eigenvalue = 1e-10;
  /// Distance from the initial point beyond which the iteration is abandoned.
  double escape_radius = 60.0;
};

struct BarycenterResult {
  ProductPoint point;
  double grad_norm = 0.0;
  int iterations = 0;
  double hess_min_eig = 0.0;
};

/// Riemannian Newton with eigenvalue-floored Hessian, Armijo backtracking and a
/// gradient-descent fallback. DegenerateMeasure if the Hessian at the critical
/// point is numerically singular; Nonconvergence on iteration cap or escape.
BarycenterResult barycenter(const BarycenterObjective& f, const ProductPoint& init,
                            const BarycenterOptions& options = {});
BarycenterResult barycenter(const ScaledProductMetric& metric, const AtomicBoundaryMeasure& sigma,
                            const ProductPoint& init, const BarycenterOptions& options = {});

enum class InnerAverage {
  /// Closed-form average of B_0 over each nu_z.
  Exact,
  /// n_theta transported atoms per z.
  Atomic,
};

struct NaturalMapConfig {
  std::size_t n_z = 10000;
  std::size_t n_theta = 10000;
  std::uint64_t seed = 1;
  InnerAverage inner = InnerAverage::Exact;
  /// Target metric of the barycenter objective; g_min of the factors by default.
  std::optional<ScaledProductMetric> target;
  /// Normalization point of B_0; the product basepoint by default.
  std::optional<ProductPoint> basepoint;
  FrameRotation frame;
  /// Solver start; y by default.
  std::optional<ProductPoint> init;
  BarycenterOptions solver;
};

struct NaturalMapResult {
  BarycenterResult barycenter;
  double ess = 0.0;
  std::vector<std::string> warnings;
};

/// F_s(y): barycenter of sigma_y^s built from g_beta. ParameterError unless s > h(g_beta).
NaturalMapResult natural_map(const ScaledProductMetric& g_beta, const ProductPoint& y, double s,
                             const NaturalMapConfig& config = {});

struct JacobianReport {
  ProductPoint image;
  Mat differential;
  double jac_det = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double homothety_deviation = 0.0;
  bool violation = false;
  double ess_min = 0.0;
};

/// Central differences of F_s in orthonormal frames (g_beta at y, target
/// metric at F_s(y)). Every stencil point reuses the configured seed.
/// A failed stencil solve is rethrown as StencilFailure.
JacobianReport jacobian_fd(const ScaledProductMetric& g_beta, const ProductPoint& y, double s, double eps = 1e-3,
                           const NaturalMapConfig& config = {}, double bound_tolerance = 0.1);

/// v_(x, theta) = -grad B_0(x, theta), orthonormal coordinates of `metric`.
Vec direction_to(const ScaledProductMetric& metric, const ProductPoint& x, const FurstenbergPoint& theta);

/// int <v_(x, theta), v> d(nu)(theta) for a unit vector v in orthonormal coordinates.
double alignment(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& v,
                 const AtomicBoundaryMeasure& nu);

/// Premise of the localization check: mass C in (1/2, 1) on a set K whose
/// alignments are all at least 1/C - 1. ConfigError for C outside (1/2, 1).
bool localization_check(double mass_in_k, const std::vector<double>& alignments);

}  // namespace minent

#endif  // MINENT_BARYCENTER_HPP
