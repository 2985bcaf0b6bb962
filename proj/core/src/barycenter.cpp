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

#include "minent/barycenter.hpp"

#include <cmath>
#include <string>

#include "minent/errors.hpp"
#include "minent/parallel.hpp"
#include "minent/radial_average.hpp"

namespace minent {
namespace {

constexpr std::size_t kChunk = 8192;

/// Per-block partial sums: value, stacked gradient, and per-factor second moments.
struct Partial {
  double value = 0.0;
  Vec gradient;
  std::vector<Mat> blocks;
};

Partial zero_partial(const ScaledProductMetric& metric) {
  Partial p;
  p.gradient = Vec::Zero(metric.dimension());
  for (const auto& f : metric.factors()) {
    p.blocks.push_back(Mat::Zero(f.n, f.n));
  }
  return p;
}

Partial add(Partial a, const Partial& b) {
  a.value += b.value;
  a.gradient += b.gradient;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    a.blocks[i] += b.blocks[i];
  }
  return a;
}

std::vector<double> coefficients(const ScaledProductMetric& metric) {
  require_real(metric);
  return metric.busemann_coefficients();
}

}  // namespace

AtomicObjective::AtomicObjective(ScaledProductMetric metric, const AtomicBoundaryMeasure& sigma,
                                 std::optional<ProductPoint> basepoint)
    : metric_(std::move(metric)), sigma_(sigma), coef_(coefficients(metric_)) {
  if (sigma_.rank() != metric_.rank()) {
    throw ShapeError("measure and metric have different numbers of factors");
  }
  for (std::size_t i = 0; i < metric_.rank(); ++i) {
    if (sigma_.directions(i).rows() != metric_.factor(i).n) {
      throw ShapeError("measure factor " + std::to_string(i) + " has the wrong dimension");
    }
  }
  offsets_ = Vec::Zero(static_cast<Eigen::Index>(sigma_.size()));
  if (basepoint) {
    check_shape(metric_, *basepoint);
    for (std::size_t j = 0; j < sigma_.size(); ++j) {
      double off = 0.0;
      for (std::size_t i = 0; i < metric_.rank(); ++i) {
        off += coef_[i] * hyperbolic::busemann(basepoint->factor(i),
                                               sigma_.directions(i).col(static_cast<Eigen::Index>(j)));
      }
      offsets_(static_cast<Eigen::Index>(j)) = off;
    }
  }
}

double AtomicObjective::value(const ProductPoint& x) const {
  check_shape(metric_, x);
  const Vec& w = sigma_.weights();
  return blocked_reduce(
      sigma_.size(), kChunk, 0.0,
      [&](std::size_t j0, std::size_t j1) {
        double acc = 0.0;
        for (std::size_t j = j0; j < j1; ++j) {
          const auto col = static_cast<Eigen::Index>(j);
          double b = -offsets_(col);
          for (std::size_t i = 0; i < metric_.rank(); ++i) {
            b += coef_[i] * hyperbolic::busemann(x.factor(i), sigma_.directions(i).col(col));
          }
          acc += w(col) * b;
        }
        return acc;
      },
      [](double a, double b) { return a + b; });
}

ObjectiveEval AtomicObjective::evaluate(const ProductPoint& x) const {
  check_shape(metric_, x);
  const Vec& w = sigma_.weights();
  const auto& c = metric_.centroid_weights();
  const Partial total = blocked_reduce(
      sigma_.size(), kChunk, zero_partial(metric_),
      [&](std::size_t j0, std::size_t j1) {
        Partial p = zero_partial(metric_);
        for (std::size_t i = 0; i < metric_.rank(); ++i) {
          const int ni = metric_.factor(i).n;
          const int off = metric_.offset(i);
          Vec dir(ni);
          Vec grad = Vec::Zero(ni);
          for (std::size_t j = j0; j < j1; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            const auto theta = sigma_.directions(i).col(col);
            const double wj = w(col);
            p.value += wj * coef_[i] * hyperbolic::busemann(x.factor(i), theta);
            hyperbolic::visual_direction(x.factor(i), theta, dir);
            grad.noalias() -= wj * dir;
            p.blocks[i].noalias() += wj * dir * dir.transpose();
          }
          p.gradient.segment(off, ni) = c[i] * grad;
        }
        for (std::size_t j = j0; j < j1; ++j) {
          p.value -= w(static_cast<Eigen::Index>(j)) * offsets_(static_cast<Eigen::Index>(j));
        }
        return p;
      },
      add);

  ObjectiveEval ev;
  ev.value = total.value;
  ev.gradient = total.gradient;
  const int n = metric_.dimension();
  ev.hessian = Mat::Zero(n, n);
  for (std::size_t i = 0; i < metric_.rank(); ++i) {
    const int ni = metric_.factor(i).n;
    ev.hessian.block(metric_.offset(i), metric_.offset(i), ni, ni) =
        (c[i] / metric_.scale(i)) * (Mat::Identity(ni, ni) - total.blocks[i]);
  }
  return ev;
}

ConvolvedObjective::ConvolvedObjective(ScaledProductMetric metric, const AtomicInteriorMeasure& mu,
                                       std::optional<ProductPoint> basepoint)
    : metric_(std::move(metric)), mu_(mu), coef_(coefficients(metric_)) {
  if (mu_.points.size() != metric_.rank()) {
    throw ShapeError("interior measure and metric have different numbers of factors");
  }
  for (std::size_t i = 0; i < metric_.rank(); ++i) {
    if (mu_.points[i].rows() != metric_.factor(i).n + 1) {
      throw ShapeError("interior measure factor " + std::to_string(i) + " has the wrong dimension");
    }
  }
  const ProductPoint base = basepoint ? *basepoint : ProductPoint::basepoint(metric_.factors());
  check_shape(metric_, base);
  for (std::size_t j = 0; j < mu_.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < metric_.rank(); ++i) {
      const double r = hyperbolic::distance(base.factor(i), mu_.points[i].col(col));
      offset_ += mu_.weights(col) * coef_[i] * busemann_mean_value(metric_.factor(i).n, r);
    }
  }
}

double ConvolvedObjective::value(const ProductPoint& x) const {
  check_shape(metric_, x);
  const double sum = blocked_reduce(
      mu_.size(), kChunk, 0.0,
      [&](std::size_t j0, std::size_t j1) {
        double acc = 0.0;
        for (std::size_t j = j0; j < j1; ++j) {
          const auto col = static_cast<Eigen::Index>(j);
          double v = 0.0;
          for (std::size_t i = 0; i < metric_.rank(); ++i) {
            const double r = hyperbolic::distance(x.factor(i), mu_.points[i].col(col));
            v += coef_[i] * busemann_mean_value(metric_.factor(i).n, r);
          }
          acc += mu_.weights(col) * v;
        }
        return acc;
      },
      [](double a, double b) { return a + b; });
  return sum - offset_;
}

ObjectiveEval ConvolvedObjective::evaluate(const ProductPoint& x) const {
  check_shape(metric_, x);
  const auto& c = metric_.centroid_weights();
  // blocks[i] accumulates sum w (F'' u u^T + F' coth (I - u u^T)) in frame coordinates.
  const Partial total = blocked_reduce(
      mu_.size(), kChunk, zero_partial(metric_),
      [&](std::size_t j0, std::size_t j1) {
        Partial p = zero_partial(metric_);
        for (std::size_t i = 0; i < metric_.rank(); ++i) {
          const int ni = metric_.factor(i).n;
          Vec local(ni + 1);
          Vec grad = Vec::Zero(ni);
          double diag = 0.0;
          for (std::size_t j = j0; j < j1; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            const double wj = mu_.weights(col);
            hyperbolic::boost_inverse_apply(x.factor(i), mu_.points[i].col(col), local);
            const double sinh_r = local.tail(ni).norm();
            const double r = std::asinh(sinh_r);
            const RadialJet jet = busemann_mean(ni, r);
            p.value += wj * coef_[i] * jet.value;
            diag += wj * jet.d1_coth;
            if (sinh_r > 0.0) {
              const Vec u = local.tail(ni) / sinh_r;
              grad.noalias() -= (wj * jet.d1) * u;
              p.blocks[i].noalias() += (wj * (jet.d2 - jet.d1_coth)) * u * u.transpose();
            }
          }
          p.blocks[i].diagonal().array() += diag;
          p.gradient.segment(metric_.offset(i), ni) = c[i] * grad;
        }
        return p;
      },
      add);

  ObjectiveEval ev;
  ev.value = total.value - offset_;
  ev.gradient = total.gradient;
  const int n = metric_.dimension();
  ev.hessian = Mat::Zero(n, n);
  for (std::size_t i = 0; i < metric_.rank(); ++i) {
    const int ni = metric_.factor(i).n;
    ev.hessian.block(metric_.offset(i), metric_.offset(i), ni, ni) = (c[i] / metric_.scale(i)) * total.blocks[i];
  }
  return ev;
}

ObjectiveEval objective(const ScaledProductMetric& metric, const ProductPoint& x, const AtomicBoundaryMeasure& sigma) {
  return AtomicObjective(metric, sigma).evaluate(x);
}

BarycenterResult barycenter(const BarycenterObjective& f, const ProductPoint& init,
                            const BarycenterOptions& options) {
  if (!(options.tol > 0.0)) {
    throw ConfigError("barycenter tolerance must be positive");
  }
  const ScaledProductMetric& metric = f.metric();
  check_shape(metric, init);
  ProductPoint x = init;
  BarycenterResult result;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const ObjectiveEval ev = f.evaluate(x);
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (ev.hessian + ev.hessian.transpose()));
    const double min_eig = eig.eigenvalues().minCoeff();
    const double grad_norm = ev.gradient.norm();
    result.point = x;
    result.grad_norm = grad_norm;
    result.iterations = iter;
    result.hess_min_eig = min_eig;
    if (grad_norm < options.tol) {
      if (!(min_eig > options.degenerate_eigenvalue)) {
        throw DegenerateMeasure("objective Hessian is singular at the critical point (min eigenvalue " +
                                std::to_string(min_eig) + ")");
      }
      return result;
    }
    if (iter == options.max_iterations) {
      break;
    }

    const Vec floored = eig.eigenvalues().cwiseMax(options.hessian_floor);
    const Vec newton =
        -eig.eigenvectors() * (eig.eigenvectors().transpose() * ev.gradient).cwiseQuotient(floored);
    bool moved = false;
    for (const Vec& step : {newton, Vec(-ev.gradient)}) {
      const double slope = ev.gradient.dot(step);
      if (!(slope < 0.0)) {
        continue;
      }
      double t = 1.0;
      for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
        const ProductPoint trial = exp_orthonormal(metric, x, t * step);
        // Below rounding level the decrease cannot be measured; accept it.
        if (-t * slope < 1e-13 * (1.0 + std::abs(ev.value))) {
          x = trial;
          moved = true;
          break;
        }
        const double fv = f.value(trial);
        if (fv <= ev.value + 1e-4 * t * slope) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (moved) {
        break;
      }
    }
    if (!moved) {
      throw Nonconvergence("barycenter line search failed at iteration " + std::to_string(iter));
    }
    if (product_distance(metric, init, x) > options.escape_radius) {
      throw Nonconvergence("barycenter iterate escaped beyond distance " + std::to_string(options.escape_radius) +
                           " from the start; the objective may be unbounded below");
    }
  }
  throw Nonconvergence("barycenter: gradient norm " + std::to_string(result.grad_norm) + " after " +
                       std::to_string(options.max_iterations) + " iterations");
}

BarycenterResult barycenter(const ScaledProductMetric& metric, const AtomicBoundaryMeasure& sigma,
                            const ProductPoint& init, const BarycenterOptions& options) {
  return barycenter(AtomicObjective(metric, sigma), init, options);
}

Vec direction_to(const ScaledProductMetric& metric, const ProductPoint& x, const FurstenbergPoint& theta) {
  return -weighted_busemann_jet(metric, x, theta).gradient;
}

double alignment(const ScaledProductMetric& metric, const ProductPoint& x, const Vec& v,
                 const AtomicBoundaryMeasure& nu) {
  require_real(metric);
  check_shape(metric, x);
  if (v.size() != metric.dimension()) {
    throw ShapeError("direction has the wrong length");
  }
  const auto& c = metric.centroid_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < metric.rank(); ++i) {
    const int ni = metric.factor(i).n;
    const Vec vi = v.segment(metric.offset(i), ni);
    Vec dir(ni);
    double acc = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      hyperbolic::visual_direction(x.factor(i), nu.directions(i).col(col), dir);
      acc += nu.weights()(col) * dir.dot(vi);
    }
    total += c[i] * acc;
  }
  return total;
}

bool localization_check(double mass_in_k, const std::vector<double>& alignments) {
  if (!(mass_in_k > 0.5 && mass_in_k < 1.0)) {
    throw ConfigError("localization constant must lie in (1/2, 1)");
  }
  if (alignments.empty()) {
    return false;
  }
  const double threshold = 1.0 / mass_in_k - 1.0;
  for (double a : alignments) {
    if (!(a >= threshold)) {
      return false;
    }
  }
  return true;
}

}  // namespace minent
