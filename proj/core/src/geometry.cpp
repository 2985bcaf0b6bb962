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

#include "minent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "minent/errors.hpp"

namespace minent {

FactorSpec::FactorSpec(int n_, int d_) : n(n_), d(d_) {
  if (n < 3) {
    throw ConfigError("factor dimension must be at least 3, got " + std::to_string(n));
  }
  if (d != 1 && d != 2 && d != 4) {
    throw ConfigError("division-algebra dimension must be 1, 2 or 4, got " + std::to_string(d));
  }
  if (n % d != 0) {
    throw ConfigError("factor dimension " + std::to_string(n) + " is not divisible by d = " +
                      std::to_string(d));
  }
}

namespace {

void validate_scales(const std::vector<FactorSpec>& factors, const std::vector<double>& scales) {
  if (factors.empty()) {
    throw ConfigError("a product metric needs at least one factor");
  }
  if (scales.size() != factors.size()) {
    throw ConfigError("expected " + std::to_string(factors.size()) + " scales, got " +
                      std::to_string(scales.size()));
  }
  for (double b : scales) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw ConfigError("scales must be positive and finite");
    }
  }
}

}  // namespace

ScaledProductMetric::ScaledProductMetric(std::vector<FactorSpec> factors, std::vector<double> scales)
    : factors_(std::move(factors)), scales_(std::move(scales)) {
  validate_scales(factors_, scales_);
  const double h = entropy();
  weights_.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    weights_[i] = factors_[i].h() / scales_[i] / h;
  }
}

ScaledProductMetric ScaledProductMetric::unscaled(std::vector<FactorSpec> factors) {
  std::vector<double> ones(factors.size(), 1.0);
  return {std::move(factors), std::move(ones)};
}

ScaledProductMetric ScaledProductMetric::with_centroid_weights(std::vector<FactorSpec> factors,
                                                               std::vector<double> scales,
                                                               std::vector<double> weights) {
  ScaledProductMetric metric(std::move(factors), std::move(scales));
  if (weights.size() != metric.rank()) {
    throw ConfigError("expected one centroid weight per factor");
  }
  double sum_sq = 0.0;
  for (double c : weights) {
    if (!(c > 0.0)) {
      throw ConfigError("centroid weights must be positive");
    }
    sum_sq += c * c;
  }
  if (std::abs(sum_sq - 1.0) > default_tolerances().centroid_weights) {
    throw ConfigError("centroid weights must have unit Euclidean norm");
  }
  metric.weights_ = std::move(weights);
  return metric;
}

int ScaledProductMetric::dimension() const noexcept {
  int n = 0;
  for (const auto& f : factors_) {
    n += f.n;
  }
  return n;
}

int ScaledProductMetric::offset(std::size_t i) const {
  int off = 0;
  for (std::size_t j = 0; j < i; ++j) {
    off += factors_.at(j).n;
  }
  return off;
}

double ScaledProductMetric::entropy() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const double r = factors_[i].h() / scales_[i];
    sum += r * r;
  }
  return std::sqrt(sum);
}

std::vector<double> ScaledProductMetric::busemann_coefficients() const {
  std::vector<double> a(factors_.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = weights_[i] * scales_[i];
  }
  return a;
}

bool ScaledProductMetric::is_real() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](const FactorSpec& f) { return f.is_real(); });
}

// ---------------------------------------------------------------------------

namespace {

Vec lift_spatial(const Eigen::Ref<const Vec>& xs) {
  Vec x(xs.size() + 1);
  x(0) = std::sqrt(1.0 + xs.squaredNorm());
  x.tail(xs.size()) = xs;
  return x;
}

Vec renormalized(const Vec& x) { return lift_spatial(x.tail(x.size() - 1)); }

}  // namespace

ProductPoint::ProductPoint(std::vector<Vec> coords, double tol) : coords_(std::move(coords)) {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const Vec& x = coords_[i];
    if (x.size() < 2 || !x.allFinite()) {
      throw InvalidPoint("factor " + std::to_string(i) + ": malformed coordinates");
    }
    const double residual = hyperbolic::dot(x, x) + 1.0;
    if (!(x(0) > 0.0) || std::abs(residual) > tol * x(0) * x(0)) {
      throw InvalidPoint("factor " + std::to_string(i) + ": not on the upper hyperboloid");
    }
  }
}

ProductPoint make_point_unchecked(std::vector<Vec> coords) {
  return ProductPoint(std::move(coords), ProductPoint::Unchecked{});
}

ProductPoint ProductPoint::basepoint(const std::vector<FactorSpec>& factors) {
  std::vector<Vec> coords;
  coords.reserve(factors.size());
  for (const auto& f : factors) {
    Vec x = Vec::Zero(f.n + 1);
    x(0) = 1.0;
    coords.push_back(std::move(x));
  }
  return make_point_unchecked(std::move(coords));
}

ProductPoint ProductPoint::from_spatial(const std::vector<Vec>& spatial) {
  std::vector<Vec> coords;
  coords.reserve(spatial.size());
  for (const auto& xs : spatial) {
    if (!xs.allFinite()) {
      throw InvalidPoint("non-finite spatial coordinates");
    }
    coords.push_back(lift_spatial(xs));
  }
  return make_point_unchecked(std::move(coords));
}

ProductPoint ProductPoint::from_ball(const std::vector<Vec>& ball) {
  std::vector<Vec> coords;
  coords.reserve(ball.size());
  for (const auto& u : ball) {
    if (!(u.squaredNorm() < 1.0)) {
      throw InvalidPoint("ball coordinates must lie in the open unit ball");
    }
    coords.push_back(hyperbolic::from_ball(u));
  }
  return make_point_unchecked(std::move(coords));
}

std::vector<Vec> ProductPoint::to_ball() const {
  std::vector<Vec> out;
  out.reserve(coords_.size());
  for (const auto& x : coords_) {
    out.push_back(hyperbolic::to_ball(x));
  }
  return out;
}

FurstenbergPoint::FurstenbergPoint(std::vector<Vec> directions, double tol)
    : directions_(std::move(directions)) {
  for (const auto& t : directions_) {
    if (!t.allFinite() || std::abs(t.norm() - 1.0) > tol) {
      throw InvalidPoint("boundary directions must be unit vectors");
    }
  }
}

// ---------------------------------------------------------------------------

namespace hyperbolic {

void boost_apply(const Eigen::Ref<const Vec>& w, const Eigen::Ref<const Vec>& v, Eigen::Ref<Vec> out) {
  const Eigen::Index m = w.size() - 1;
  const double ws_vs = w.tail(m).dot(v.tail(m));
  const double v0 = v(0);
  out(0) = w(0) * v0 + ws_vs;
  out.tail(m) = v.tail(m) + w.tail(m) * (v0 + ws_vs / (1.0 + w(0)));
}

void boost_inverse_apply(const Eigen::Ref<const Vec>& w, const Eigen::Ref<const Vec>& v,
                         Eigen::Ref<Vec> out) {
  const Eigen::Index m = w.size() - 1;
  const double ws_vs = -w.tail(m).dot(v.tail(m));
  const double v0 = v(0);
  out(0) = w(0) * v0 + ws_vs;
  out.tail(m) = v.tail(m) - w.tail(m) * (v0 + ws_vs / (1.0 + w(0)));
}

Mat boost_matrix(const Eigen::Ref<const Vec>& w) {
  const Eigen::Index m = w.size() - 1;
  Mat t(w.size(), w.size());
  t(0, 0) = w(0);
  t.block(0, 1, 1, m) = w.tail(m).transpose();
  t.block(1, 0, m, 1) = w.tail(m);
  t.block(1, 1, m, m) = Mat::Identity(m, m) + w.tail(m) * w.tail(m).transpose() / (1.0 + w(0));
  return t;
}

double distance(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) {
  const double q = -dot(x, y);
  const double slack = default_tolerances().pairing_slack * std::max(1.0, x(0) * y(0));
  if (!(q >= 1.0 - slack)) {
    throw InvalidPoint("Minkowski pairing above -1: points are not on the hyperboloid");
  }
  if (q < 2.0) {
    const Vec diff = x - y;
    const double m = std::max(0.0, dot(diff, diff));
    return 2.0 * std::asinh(0.5 * std::sqrt(m));
  }
  return std::acosh(q);
}

Vec exp(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& v) {
  const double norm = std::sqrt(std::max(0.0, dot(v, v)));
  if (norm == 0.0) {
    return x;
  }
  const Vec y = std::cosh(norm) * x + (std::sinh(norm) / norm) * v;
  return renormalized(y);
}

Vec log(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) {
  const Vec u = y + dot(x, y) * x;
  const double u_norm = std::sqrt(std::max(0.0, dot(u, u)));
  if (u_norm == 0.0) {
    return Vec::Zero(x.size());
  }
  return (distance(x, y) / u_norm) * u;
}

double horo_pairing(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta) {
  const Eigen::Index m = x.size() - 1;
  const double t = x.tail(m).dot(theta);
  if (t <= 0.0) {
    return x(0) - t;
  }
  // x_0 - t = (x_0^2 - t^2) / (x_0 + t) and x_0^2 = 1 + |x_s|^2.
  return (1.0 + (x.tail(m) - t * theta).squaredNorm()) / (x(0) + t);
}

double busemann(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta) {
  return std::log(horo_pairing(x, theta));
}

void visual_direction(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                      Eigen::Ref<Vec> out) {
  const Eigen::Index m = x.size() - 1;
  const double coef = 1.0 - x.tail(m).dot(theta) / (1.0 + x(0));
  out = theta - coef * x.tail(m);
  out /= out.norm();
}

Vec boundary_apply(const Mat& lorentz, const Eigen::Ref<const Vec>& theta) {
  Vec ell(theta.size() + 1);
  ell(0) = 1.0;
  ell.tail(theta.size()) = theta;
  const Vec image = lorentz * ell;
  Vec out = image.tail(theta.size());
  return out / out.norm();
}

Vec to_frame(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& v) {
  Vec tmp(x.size());
  boost_inverse_apply(x, v, tmp);
  return tmp.tail(x.size() - 1);
}

Vec from_frame(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& xi) {
  Vec v(x.size());
  v(0) = 0.0;
  v.tail(xi.size()) = xi;
  Vec out(x.size());
  boost_apply(x, v, out);
  return out;
}

Vec to_ball(const Eigen::Ref<const Vec>& x) { return x.tail(x.size() - 1) / (1.0 + x(0)); }

Vec from_ball(const Eigen::Ref<const Vec>& u) {
  const double r2 = u.squaredNorm();
  const double denom = 1.0 - r2;
  Vec x(u.size() + 1);
  x(0) = (1.0 + r2) / denom;
  x.tail(u.size()) = 2.0 * u / denom;
  return x;
}

}  // namespace hyperbolic

// ---------------------------------------------------------------------------

ProductIsometry::ProductIsometry(std::vector<Mat> lorentz) : lorentz_(std::move(lorentz)) {
  for (const auto& l : lorentz_) {
    if (l.rows() != l.cols() || l.rows() < 2) {
      throw ShapeError("Lorentz matrices must be square");
    }
  }
}

ProductIsometry ProductIsometry::identity(const std::vector<FactorSpec>& factors) {
  std::vector<Mat> ls;
  for (const auto& f : factors) {
    ls.push_back(Mat::Identity(f.n + 1, f.n + 1));
  }
  return ProductIsometry(std::move(ls));
}

ProductIsometry ProductIsometry::rotation(const std::vector<Mat>& rotations) {
  std::vector<Mat> ls;
  for (const auto& r : rotations) {
    if (r.rows() != r.cols()) {
      throw ShapeError("rotation blocks must be square");
    }
    const Eigen::Index m = r.rows();
    if ((r.transpose() * r - Mat::Identity(m, m)).norm() > 1e-10) {
      throw ConfigError("rotation blocks must be orthogonal");
    }
    Mat l = Mat::Identity(m + 1, m + 1);
    l.block(1, 1, m, m) = r;
    ls.push_back(std::move(l));
  }
  return ProductIsometry(std::move(ls));
}

ProductIsometry ProductIsometry::translation(const ProductPoint& x) {
  std::vector<Mat> ls;
  for (const auto& xi : x.coords()) {
    ls.push_back(hyperbolic::boost_matrix(xi));
  }
  return ProductIsometry(std::move(ls));
}

ProductIsometry ProductIsometry::compose(const ProductIsometry& other) const {
  if (other.rank() != rank()) {
    throw ShapeError("isometries act on different products");
  }
  std::vector<Mat> ls;
  for (std::size_t i = 0; i < rank(); ++i) {
    ls.push_back(lorentz_[i] * other.lorentz_[i]);
  }
  return ProductIsometry(std::move(ls));
}

ProductIsometry ProductIsometry::inverse() const {
  std::vector<Mat> ls;
  for (const auto& l : lorentz_) {
    // L^{-1} = eta L^T eta for Lorentz matrices.
    Mat inv = l.transpose();
    inv.row(0) *= -1.0;
    inv.col(0) *= -1.0;
    ls.push_back(std::move(inv));
  }
  return ProductIsometry(std::move(ls));
}

ProductPoint ProductIsometry::apply(const ProductPoint& x) const {
  if (x.rank() != rank()) {
    throw ShapeError("point and isometry have different ranks");
  }
  std::vector<Vec> coords;
  for (std::size_t i = 0; i < rank(); ++i) {
    coords.push_back(renormalized(lorentz_[i] * x.factor(i)));
  }
  return make_point_unchecked(std::move(coords));
}

FurstenbergPoint ProductIsometry::apply(const FurstenbergPoint& theta) const {
  if (theta.rank() != rank()) {
    throw ShapeError("boundary point and isometry have different ranks");
  }
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < rank(); ++i) {
    dirs.push_back(hyperbolic::boundary_apply(lorentz_[i], theta.factor(i)));
  }
  return FurstenbergPoint(std::move(dirs), 1e-9);
}

TangentVector ProductIsometry::apply(const TangentVector& v) const {
  TangentVector out{apply(v.base), {}};
  for (std::size_t i = 0; i < rank(); ++i) {
    out.components.push_back(lorentz_[i] * v.components.at(i));
  }
  return out;
}

// ---------------------------------------------------------------------------

void check_shape(const ScaledProductMetric& metric, const ProductPoint& x) {
  if (x.rank() != metric.rank()) {
    throw ShapeError("point has " + std::to_string(x.rank()) + " factors, metric has " +
                     std::to_string(metric.rank()));
  }
  for (std::size_t i = 0; i < x.rank(); ++i) {
    if (x.factor(i).size() != metric.factor(i).n + 1) {
      throw ShapeError("factor " + std::to_string(i) + " has the wrong dimension");
    }
  }
}

void check_shape(const ScaledProductMetric& metric, const FurstenbergPoint& theta) {
  if (theta.rank() != metric.rank()) {
    throw ShapeError("boundary point has the wrong number of factors");
  }
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    if (theta.factor(i).size() != metric.factor(i).n) {
      throw ShapeError("boundary factor " + std::to_string(i) + " has the wrong dimension");
    }
  }
}

void require_real(const ScaledProductMetric& metric) {
  if (!metric.is_real()) {
    throw ConfigError("geometry operations require real hyperbolic factors (d = 1)");
  }
}

double factor_distance(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) {
    throw ShapeError("factor points of different dimension");
  }
  return hyperbolic::distance(x, y);
}

double product_distance(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y) {
  check_shape(metric, x);
  check_shape(metric, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    const double d = metric.scale(i) * hyperbolic::distance(x.factor(i), y.factor(i));
    sum += d * d;
  }
  return std::sqrt(sum);
}

double tangent_norm(const ScaledProductMetric& metric, const TangentVector& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.components.size(); ++i) {
    const double b = metric.scale(i);
    sum += b * b * std::max(0.0, hyperbolic::dot(v.components[i], v.components[i]));
  }
  return std::sqrt(sum);
}

ProductPoint exp_map(const ScaledProductMetric& metric, const ProductPoint& x, const TangentVector& v) {
  check_shape(metric, x);
  if (v.components.size() != x.rank()) {
    throw ShapeError("tangent vector has the wrong number of factors");
  }
  std::vector<Vec> coords;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    coords.push_back(hyperbolic::exp(x.factor(i), v.components[i]));
  }
  return make_point_unchecked(std::move(coords));
}

TangentVector log_map(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y) {
  check_shape(metric, x);
  check_shape(metric, y);
  TangentVector v{x, {}};
  for (std::size_t i = 0; i < x.rank(); ++i) {
    v.components.push_back(hyperbolic::log(x.factor(i), y.factor(i)));
  }
  return v;
}

Vec to_orthonormal(const ScaledProductMetric& metric, const TangentVector& v) {
  Vec zeta(metric.dimension());
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    zeta.segment(metric.offset(i), metric.factor(i).n) =
        metric.scale(i) * hyperbolic::to_frame(v.base.factor(i), v.components.at(i));
  }
  return zeta;
}

TangentVector from_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& zeta) {
  check_shape(metric, x);
  if (zeta.size() != metric.dimension()) {
    throw ShapeError("orthonormal coordinate vector has the wrong length");
  }
  TangentVector v{x, {}};
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    const Vec xi = zeta.segment(metric.offset(i), metric.factor(i).n) / metric.scale(i);
    v.components.push_back(hyperbolic::from_frame(x.factor(i), xi));
  }
  return v;
}

ProductPoint exp_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& zeta) {
  return exp_map(metric, x, from_orthonormal(metric, x, zeta));
}

Vec log_orthonormal(const ScaledProductMetric& metric, const ProductPoint& x, const ProductPoint& y) {
  return to_orthonormal(metric, log_map(metric, x, y));
}

double factor_busemann(const Vec& x, const Vec& theta) {
  if (x.size() != theta.size() + 1) {
    throw ShapeError("point and boundary direction have mismatched dimensions");
  }
  return hyperbolic::busemann(x, theta);
}

double factor_busemann(const Vec& x, const Vec& y, const Vec& theta) {
  return factor_busemann(y, theta) - factor_busemann(x, theta);
}

double weighted_busemann(const ScaledProductMetric& metric, const ProductPoint& x,
                         const FurstenbergPoint& theta, const std::optional<ProductPoint>& basepoint) {
  require_real(metric);
  check_shape(metric, x);
  check_shape(metric, theta);
  const auto a = metric.busemann_coefficients();
  double value = 0.0;
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    value += a[i] * hyperbolic::busemann(x.factor(i), theta.factor(i));
    if (basepoint) {
      value -= a[i] * hyperbolic::busemann(basepoint->factor(i), theta.factor(i));
    }
  }
  return value;
}

BusemannJet weighted_busemann_jet(const ScaledProductMetric& metric, const ProductPoint& x,
                                  const FurstenbergPoint& theta,
                                  const std::optional<ProductPoint>& basepoint) {
  BusemannJet jet;
  jet.value = weighted_busemann(metric, x, theta, basepoint);
  const int n = metric.dimension();
  jet.gradient = Vec::Zero(n);
  jet.hessian = Mat::Zero(n, n);
  const auto& c = metric.centroid_weights();
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    const int ni = metric.factor(i).n;
    const int off = metric.offset(i);
    Vec dir(ni);
    hyperbolic::visual_direction(x.factor(i), theta.factor(i), dir);
    jet.gradient.segment(off, ni) = -c[i] * dir;
    jet.hessian.block(off, off, ni, ni) =
        (c[i] / metric.scale(i)) * (Mat::Identity(ni, ni) - dir * dir.transpose());
  }
  return jet;
}

TangentVector weighted_busemann_gradient(const ScaledProductMetric& metric, const ProductPoint& x,
                                         const FurstenbergPoint& theta) {
  const BusemannJet jet = weighted_busemann_jet(metric, x, theta);
  return from_orthonormal(metric, x, jet.gradient);
}

}  // namespace minent
