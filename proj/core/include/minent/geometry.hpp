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

#ifndef MINENT_GEOMETRY_HPP
#define MINENT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "minent/config.hpp"

namespace minent {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Rank-one factor H^n over a division algebra of real dimension d.
struct FactorSpec {
  int n = 3;
  int d = 1;

  FactorSpec() = default;
  /// Throws ConfigError unless n >= 3, d in {1,2,4} and the divisibility rules hold.
  FactorSpec(int n_, int d_ = 1);

  /// Volume entropy at curvature normalized to max -1.
  int h() const noexcept { return n + d - 2; }
  bool is_real() const noexcept { return d == 1; }

  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

/// Product metric g_beta = beta_1^2 g_1 x ... x beta_k^2 g_k.
///
/// Also carries the centroid weights c_i used by the weighted Busemann
/// function. By default c_i = (h_i / beta_i) / h(g_beta), which equals
/// sqrt(n_i / n) at the entropy-minimizing metric.
class ScaledProductMetric {
 public:
  ScaledProductMetric(std::vector<FactorSpec> factors, std::vector<double> scales);

  /// Unit scales.
  static ScaledProductMetric unscaled(std::vector<FactorSpec> factors);
  /// Explicit centroid weights; ConfigError unless positive with sum of squares 1.
  static ScaledProductMetric with_centroid_weights(std::vector<FactorSpec> factors,
                                                   std::vector<double> scales,
                                                   std::vector<double> weights);

  const std::vector<FactorSpec>& factors() const noexcept { return factors_; }
  const std::vector<double>& scales() const noexcept { return scales_; }
  const std::vector<double>& centroid_weights() const noexcept { return weights_; }
  const FactorSpec& factor(std::size_t i) const { return factors_.at(i); }
  double scale(std::size_t i) const { return scales_.at(i); }

  std::size_t rank() const noexcept { return factors_.size(); }
  int dimension() const noexcept;
  /// Offset of factor i inside a stacked n-vector of frame coordinates.
  int offset(std::size_t i) const;
  /// Closed-form volume entropy sqrt(sum (h_i / beta_i)^2).
  double entropy() const noexcept;
  /// Coefficients a_i = c_i beta_i of B_0 = sum a_i B_i.
  std::vector<double> busemann_coefficients() const;
  /// True when every factor is real hyperbolic.
  bool is_real() const noexcept;

 private:
  std::vector<FactorSpec> factors_;
  std::vector<double> scales_;
  std::vector<double> weights_;
};

/// Point of the product of hyperboloids, one (n_i + 1)-vector per factor.
class ProductPoint {
 public:
  ProductPoint() = default;
  /// Validates the hyperboloid constraint of every factor (InvalidPoint).
  explicit ProductPoint(std::vector<Vec> coords, double tol = default_tolerances().hyperboloid);

  static ProductPoint basepoint(const std::vector<FactorSpec>& factors);
  /// Lifts spatial parts x_s by x_0 = sqrt(1 + |x_s|^2).
  static ProductPoint from_spatial(const std::vector<Vec>& spatial);
  /// Poincare ball coordinates, |u_i| < 1.
  static ProductPoint from_ball(const std::vector<Vec>& ball);
  std::vector<Vec> to_ball() const;

  std::size_t rank() const noexcept { return coords_.size(); }
  const Vec& factor(std::size_t i) const { return coords_.at(i); }
  const std::vector<Vec>& coords() const noexcept { return coords_; }

 private:
  struct Unchecked {};
  ProductPoint(std::vector<Vec> coords, Unchecked) : coords_(std::move(coords)) {}
  friend ProductPoint make_point_unchecked(std::vector<Vec> coords);

  std::vector<Vec> coords_;
};

/// Internal constructor for points produced by exact isometries and maps.
ProductPoint make_point_unchecked(std::vector<Vec> coords);

/// Tangent vector in ambient Minkowski coordinates, one block per factor.
struct TangentVector {
  ProductPoint base;
  std::vector<Vec> components;
};

/// Point of the Furstenberg boundary, one unit direction per factor sphere.
class FurstenbergPoint {
 public:
  FurstenbergPoint() = default;
  explicit FurstenbergPoint(std::vector<Vec> directions,
                            double tol = default_tolerances().unit_direction);

  std::size_t rank() const noexcept { return directions_.size(); }
  const Vec& factor(std::size_t i) const { return directions_.at(i); }
  const std::vector<Vec>& directions() const noexcept { return directions_; }

 private:
  std::vector<Vec> directions_;
};

/// Product of factor isometries, stored as Lorentz matrices.
class ProductIsometry {
 public:
  explicit ProductIsometry(std::vector<Mat> lorentz);

  static ProductIsometry identity(const std::vector<FactorSpec>& factors);
  /// Rotations about the basepoint; each R_i must be orthogonal of size n_i.
  static ProductIsometry rotation(const std::vector<Mat>& rotations);
  /// Canonical boost carrying the basepoint to x.
  static ProductIsometry translation(const ProductPoint& x);

  ProductIsometry compose(const ProductIsometry& other) const;  // this after other
  ProductIsometry inverse() const;

  ProductPoint apply(const ProductPoint& x) const;
  FurstenbergPoint apply(const FurstenbergPoint& theta) const;
  TangentVector apply(const TangentVector& v) const;

  const Mat& factor(std::size_t i) const { return lorentz_.at(i); }
  std::size_t rank() const noexcept { return lorentz_.size(); }

 private:
  std::vector<Mat> lorentz_;
};

namespace hyperbolic {

/// Minkowski pairing -a_0 b_0 + sum a_j b_j.
inline double dot(const Eigen::Ref<const Vec>& a, const Eigen::Ref<const Vec>& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

/// Canonical boost T_w applied to v, matrix free.
void boost_apply(const Eigen::Ref<const Vec>& w, const Eigen::Ref<const Vec>& v, Eigen::Ref<Vec> out);
/// T_w^{-1} applied to v.
void boost_inverse_apply(const Eigen::Ref<const Vec>& w, const Eigen::Ref<const Vec>& v,
                         Eigen::Ref<Vec> out);
/// T_w as an explicit Lorentz matrix.
Mat boost_matrix(const Eigen::Ref<const Vec>& w);

/// Distance in H^n; InvalidPoint if the pairing exceeds -1 beyond rounding.
double distance(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y);
Vec exp(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& v);
Vec log(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y);

/// -<x, (1, theta)> computed without cancellation.
double horo_pairing(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta);
/// Basepoint-normalized Busemann function log(x_0 - x_s . theta).
double busemann(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta);
/// Visual direction of theta seen from x, in the frame T_x e_1..e_n.
/// The Busemann gradient in that frame is its negative.
void visual_direction(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                      Eigen::Ref<Vec> out);
/// Boundary action of a Lorentz matrix on a unit direction.
Vec boundary_apply(const Mat& lorentz, const Eigen::Ref<const Vec>& theta);

/// Frame coordinates of an ambient tangent vector at x, and back.
Vec to_frame(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& v);
Vec from_frame(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& xi);

Vec to_ball(const Eigen::Ref<const Vec>& x);
Vec from_ball(const Eigen::Ref<const Vec>& u);

}  // namespace hyperbolic

double factor_distance(const Vec& x, const Vec& y);
/// ShapeError if the factor structures differ.
double product_distance(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y);
double tangent_norm(const ScaledProductMetric& metric, const TangentVector& v);

ProductPoint exp_map(const ScaledProductMetric& metric, const ProductPoint& x, const TangentVector& v);
TangentVector log_map(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y);

/// Orthonormal coordinates of a tangent vector for the metric (stacked, length n).
Vec to_orthonormal(const ScaledProductMetric& metric, const TangentVector& v);
TangentVector from_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& zeta);
/// exp_x of the vector with orthonormal coordinates zeta.
ProductPoint exp_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& zeta);
/// Orthonormal coordinates of log_x(y).
Vec log_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y);

double factor_busemann(const Vec& x, const Vec& theta);
/// B(x, y, theta) = lim d(y, ray) - d(x, ray), the Busemann cocycle.
double factor_busemann(const Vec& x, const Vec& y, const Vec& theta);

/// Value, gradient and Hessian of the weighted Busemann function, in
/// orthonormal coordinates of the metric at x.
struct BusemannJet {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

/// B_0(x, theta) = sum c_i beta_i B_i(x_i, theta_i), normalized at `basepoint`
/// (the product basepoint when omitted). ConfigError for non-real factors.
double weighted_busemann(const ScaledProductMetric& metric, const ProductPoint& x,
                         const FurstenbergPoint& theta,
                         const std::optional<ProductPoint>& basepoint = std::nullopt);
BusemannJet weighted_busemann_jet(const ScaledProductMetric& metric, const ProductPoint& x,
                                  const FurstenbergPoint& theta,
                                  const std::optional<ProductPoint>& basepoint = std::nullopt);
/// Gradient of B_0 as an ambient tangent vector at x.
TangentVector weighted_busemann_gradient(const ScaledProductMetric& metric, const ProductPoint& x,
                                         const FurstenbergPoint& theta);

/// ShapeError unless the point matches the metric's factor dimensions.
void check_shape(const ScaledProductMetric& metric, const ProductPoint& x);
void check_shape(const ScaledProductMetric& metric, const FurstenbergPoint& theta);
/// ConfigError unless every factor is real hyperbolic.
void require_real(const ScaledProductMetric& metric);

}  // namespace minent

#endif  // MINENT_GEOMETRY_HPP
