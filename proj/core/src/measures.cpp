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

#include "minent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "minent/config.hpp"
#include "minent/errors.hpp"
#include "minent/parallel.hpp"
#include "minent/rng.hpp"

namespace minent {
namespace {

constexpr std::size_t kChunk = 8192;
constexpr std::uint32_t kSigmaStream = 7;

Vec normalized_weights(Vec w) {
  if (w.size() == 0) {
    throw ConfigError("a measure needs at least one atom");
  }
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw ConfigError("weights must be finite and nonnegative");
  }
  const double total = w.sum();
  if (!(total > 0.0)) {
    throw ConfigError("weights must have positive total mass");
  }
  return w / total;
}

std::string degeneracy_warning(const std::string& what, double ess, std::size_t n) {
  return "DegenerateSampling: " + what + " ESS " + std::to_string(ess) + " is below 1% of " + std::to_string(n) +
         " atoms";
}

void fill_direction(CounterRng& rng, Eigen::Ref<Vec> out) {
  double norm2 = 0.0;
  do {
    for (Eigen::Index j = 0; j < out.size(); ++j) {
      out(j) = rng.normal();
    }
    norm2 = out.squaredNorm();
  } while (norm2 < 1e-300);
  out /= std::sqrt(norm2);
}

/// Inverse-CDF proposal for a factor radius with density proportional to
/// sinh^h(r) e^{-kappa r}, kappa > h, piecewise constant on a fine grid.
class RadialProposal {
 public:
  RadialProposal(int h, double kappa) {
    const double gap = kappa - h;
    const double wanted = 30.0 / gap + 10.0 * (h + 1) / kappa;
    truncated_ = wanted > kMaxRadius;
    rmax_ = std::min(kMaxRadius, wanted);
    cell_ = rmax_ / kCells;
    std::vector<double> log_mass(kCells);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kCells; ++j) {
      const double mid = (j + 0.5) * cell_;
      log_mass[j] = h * log_sinh(mid) - kappa * mid;
      top = std::max(top, log_mass[j]);
    }
    cdf_.resize(kCells);
    log_density_.resize(kCells);
    double acc = 0.0;
    for (std::size_t j = 0; j < kCells; ++j) {
      acc += std::exp(log_mass[j] - top);
      cdf_[j] = acc;
    }
    for (std::size_t j = 0; j < kCells; ++j) {
      cdf_[j] /= acc;
      log_density_[j] = log_mass[j] - top - std::log(acc) - std::log(cell_);
    }
  }

  /// Returns r and writes log q(r).
  double sample(double u_cell, double u_within, double& log_q) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u_cell);
    std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), kCells - 1);
    log_q = log_density_[j];
    return (static_cast<double>(j) + u_within) * cell_;
  }

  bool truncated() const noexcept { return truncated_; }
  double rmax() const noexcept { return rmax_; }

  static double log_sinh(double x) {
    if (x > 20.0) {
      return x - std::numbers::ln2;
    }
    return std::log(std::sinh(x));
  }

 private:
  static constexpr std::size_t kCells = std::size_t{1} << 15;
  static constexpr double kMaxRadius = 250.0;
  double rmax_ = 0.0;
  double cell_ = 0.0;
  bool truncated_ = false;
  std::vector<double> cdf_;
  std::vector<double> log_density_;
};

double log_unit_sphere(int m) {
  const double half = 0.5 * (m + 1);
  return std::log(2.0) + half * std::log(std::numbers::pi) - std::lgamma(half);
}

std::vector<int> factor_dims(const ProductPoint& x) {
  std::vector<int> dims;
  for (const auto& xi : x.coords()) {
    dims.push_back(static_cast<int>(xi.size()) - 1);
  }
  return dims;
}

void check_frame(const FrameRotation& frame, const std::vector<int>& dims) {
  if (!frame) {
    return;
  }
  if (frame->size() != dims.size()) {
    throw ShapeError("frame rotation needs one block per factor");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if ((*frame)[i].rows() != dims[i] || (*frame)[i].cols() != dims[i]) {
      throw ShapeError("frame rotation block has the wrong size");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

AtomicBoundaryMeasure::AtomicBoundaryMeasure(std::vector<Mat> directions, Vec weights, Provenance provenance,
                                             std::uint64_t seed)
    : directions_(std::move(directions)),
      weights_(normalized_weights(std::move(weights))),
      provenance_(provenance),
      seed_(seed) {
  for (const auto& d : directions_) {
    if (d.cols() != weights_.size()) {
      throw ShapeError("direction matrices must have one column per atom");
    }
  }
  ess_ = effective_sample_size(weights_);
}

AtomicBoundaryMeasure AtomicBoundaryMeasure::dirac(const FurstenbergPoint& theta) {
  return from_atoms({theta}, Vec::Ones(1));
}

AtomicBoundaryMeasure AtomicBoundaryMeasure::from_atoms(const std::vector<FurstenbergPoint>& atoms,
                                                        const Vec& weights) {
  if (atoms.empty() || static_cast<Eigen::Index>(atoms.size()) != weights.size()) {
    throw ShapeError("need one weight per atom");
  }
  const std::size_t k = atoms.front().rank();
  std::vector<Mat> dirs;
  for (std::size_t i = 0; i < k; ++i) {
    dirs.emplace_back(atoms.front().factor(i).size(), static_cast<Eigen::Index>(atoms.size()));
  }
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].rank() != k) {
      throw ShapeError("atoms have different numbers of factors");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (atoms[j].factor(i).size() != dirs[i].rows()) {
        throw ShapeError("atoms have different factor dimensions");
      }
      dirs[i].col(static_cast<Eigen::Index>(j)) = atoms[j].factor(i);
    }
  }
  return {std::move(dirs), weights};
}

AtomicBoundaryMeasure AtomicBoundaryMeasure::mixture(const AtomicBoundaryMeasure& a,
                                                     const AtomicBoundaryMeasure& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ConfigError("mixture parameter must lie in [0, 1]");
  }
  if (a.rank() != b.rank()) {
    throw ShapeError("mixture of measures on different products");
  }
  std::vector<Mat> dirs;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.directions(i).rows() != b.directions(i).rows()) {
      throw ShapeError("mixture of measures on different products");
    }
    Mat d(a.directions(i).rows(), a.directions(i).cols() + b.directions(i).cols());
    d << a.directions(i), b.directions(i);
    dirs.push_back(std::move(d));
  }
  Vec w(a.weights().size() + b.weights().size());
  w << (1.0 - t) * a.weights(), t * b.weights();
  return {std::move(dirs), std::move(w)};
}

FurstenbergPoint AtomicBoundaryMeasure::atom(std::size_t j) const {
  std::vector<Vec> dirs;
  for (const auto& d : directions_) {
    dirs.emplace_back(d.col(static_cast<Eigen::Index>(j)));
  }
  return FurstenbergPoint(std::move(dirs), 1e-9);
}

void AtomicBoundaryMeasure::set_origin(std::optional<ProductPoint> center, std::optional<double> exponent) {
  center_ = std::move(center);
  exponent_ = exponent;
}

AtomicBoundaryMeasure AtomicBoundaryMeasure::pushforward(const ProductIsometry& g) const {
  if (g.rank() != rank()) {
    throw ShapeError("isometry and measure act on different products");
  }
  std::vector<Mat> dirs;
  for (std::size_t i = 0; i < rank(); ++i) {
    const Mat& l = g.factor(i);
    const Mat& d = directions_[i];
    Mat ell(d.rows() + 1, d.cols());
    ell.row(0).setOnes();
    ell.bottomRows(d.rows()) = d;
    Mat image = (l * ell).bottomRows(d.rows());
    image.colwise().normalize();
    dirs.push_back(std::move(image));
  }
  AtomicBoundaryMeasure out(std::move(dirs), weights_, provenance_, seed_);
  out.warnings_ = warnings_;
  if (center_) {
    out.center_ = g.apply(*center_);
  }
  out.exponent_ = exponent_;
  return out;
}

ProductPoint AtomicInteriorMeasure::atom(std::size_t j) const {
  std::vector<Vec> coords;
  for (const auto& p : points) {
    coords.emplace_back(p.col(static_cast<Eigen::Index>(j)));
  }
  return make_point_unchecked(std::move(coords));
}

double effective_sample_size(const Vec& weights) {
  const double s2 = weights.squaredNorm();
  return s2 > 0.0 ? weights.sum() * weights.sum() / s2 : 0.0;
}

double ps_log_density(const ProductPoint& x, const FurstenbergPoint& theta) {
  if (x.rank() != theta.rank()) {
    throw ShapeError("point and boundary point have different ranks");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    const int n = static_cast<int>(theta.factor(i).size());
    value -= (n - 1) * factor_busemann(x.factor(i), theta.factor(i));
  }
  return value;
}

std::size_t antithetic_size(std::size_t n, std::size_t rank) {
  const std::size_t orbit = std::size_t{1} << rank;
  return std::max<std::size_t>(1, (n + orbit - 1) / orbit) * orbit;
}

std::vector<Mat> uniform_boundary_cloud(const std::vector<int>& dims, std::size_t n, std::uint64_t seed,
                                        std::uint32_t stream, std::uint64_t index_offset) {
  const std::size_t k = dims.size();
  const std::size_t orbit = std::size_t{1} << k;
  const std::size_t total = antithetic_size(n, k);
  std::vector<Mat> cloud;
  for (int d : dims) {
    cloud.emplace_back(d, static_cast<Eigen::Index>(total));
  }
  parallel_for(total / orbit, kChunk / orbit, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      CounterRng rng(seed, stream, index_offset + b);
      for (std::size_t i = 0; i < k; ++i) {
        Vec dir(dims[i]);
        fill_direction(rng, dir);
        for (std::size_t pattern = 0; pattern < orbit; ++pattern) {
          const double sign = ((pattern >> i) & 1U) != 0U ? -1.0 : 1.0;
          cloud[i].col(static_cast<Eigen::Index>(b * orbit + pattern)) = sign * dir;
        }
      }
    }
  });
  return cloud;
}

AtomicBoundaryMeasure sample_ps(const ProductPoint& x, std::size_t n, std::uint64_t seed, PsScheme scheme) {
  if (n < 1) {
    throw ConfigError("sample size must be at least 1");
  }
  const auto dims = factor_dims(x);
  std::vector<Mat> cloud = uniform_boundary_cloud(dims, n, seed, streams::kBoundaryReference);
  const auto total = static_cast<std::size_t>(cloud.front().cols());
  Vec weights = Vec::Ones(static_cast<Eigen::Index>(total));

  if (scheme == PsScheme::Transported) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const Vec& xi = x.factor(i);
      Mat& d = cloud[i];
      parallel_for(total, kChunk, [&](std::size_t j0, std::size_t j1) {
        Vec ell(xi.size());
        Vec out(xi.size());
        for (std::size_t j = j0; j < j1; ++j) {
          ell(0) = 1.0;
          ell.tail(d.rows()) = d.col(static_cast<Eigen::Index>(j));
          hyperbolic::boost_apply(xi, ell, out);
          d.col(static_cast<Eigen::Index>(j)) = out.tail(d.rows()).normalized();
        }
      });
    }
  } else {
    Vec log_w(static_cast<Eigen::Index>(total));
    parallel_for(total, kChunk, [&](std::size_t j0, std::size_t j1) {
      for (std::size_t j = j0; j < j1; ++j) {
        double value = 0.0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
          value -= (dims[i] - 1) *
                   hyperbolic::busemann(x.factor(i), cloud[i].col(static_cast<Eigen::Index>(j)));
        }
        log_w(static_cast<Eigen::Index>(j)) = value;
      }
    });
    weights = (log_w.array() - log_w.maxCoeff()).exp().matrix();
  }

  AtomicBoundaryMeasure out(std::move(cloud), std::move(weights), Provenance::PattersonSullivan, seed);
  out.set_origin(x, std::nullopt);
  if (out.ess() < default_tolerances().ess_fraction * static_cast<double>(total)) {
    out.add_warning(degeneracy_warning("Patterson-Sullivan sample", out.ess(), total));
  }
  return out;
}

CapEstimate cap_mass_estimate(const AtomicBoundaryMeasure& measure, const FurstenbergPoint& theta0, double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi)) {
    throw ConfigError("cap angle must lie in (0, pi)");
  }
  if (theta0.rank() != measure.rank()) {
    throw ShapeError("cap center has the wrong number of factors");
  }
  const double cos_angle = std::cos(angle);
  const Vec& w = measure.weights();
  std::vector<char> inside(measure.size(), 1);
  for (std::size_t i = 0; i < measure.rank(); ++i) {
    const Vec dots = measure.directions(i).transpose() * theta0.factor(i);
    for (std::size_t j = 0; j < measure.size(); ++j) {
      inside[j] = static_cast<char>(inside[j] && dots(static_cast<Eigen::Index>(j)) >= cos_angle);
    }
  }
  CapEstimate est;
  for (std::size_t j = 0; j < measure.size(); ++j) {
    est.mass += inside[j] ? w(static_cast<Eigen::Index>(j)) : 0.0;
  }
  double var = 0.0;
  for (std::size_t j = 0; j < measure.size(); ++j) {
    const double dev = (inside[j] ? 1.0 : 0.0) - est.mass;
    const double wj = w(static_cast<Eigen::Index>(j));
    var += wj * wj * dev * dev;
  }
  est.std_error = std::sqrt(var);
  return est;
}

double cap_mass(const AtomicBoundaryMeasure& measure, const FurstenbergPoint& theta0, double angle) {
  return cap_mass_estimate(measure, theta0, angle).mass;
}

AtomicInteriorMeasure sample_mu(const ScaledProductMetric& metric, const ProductPoint& y, double s, std::size_t n,
                                std::uint64_t seed, const FrameRotation& frame) {
  require_real(metric);
  check_shape(metric, y);
  const double h = metric.entropy();
  if (!(s > h)) {
    throw ParameterError("s must exceed h(g_beta): s = " + std::to_string(s) + ", h = " + std::to_string(h));
  }
  if (n < 1) {
    throw ConfigError("sample size must be at least 1");
  }
  const std::size_t k = metric.rank();
  std::vector<int> dims;
  std::vector<RadialProposal> proposals;
  AtomicInteriorMeasure mu;
  for (std::size_t i = 0; i < k; ++i) {
    const int hi = metric.factor(i).n - 1;
    dims.push_back(metric.factor(i).n);
    // kappa_i = h_i s / h keeps sum kappa_i r_i <= s d_beta(r), so weights are bounded.
    proposals.emplace_back(hi, hi * s / h);
    if (proposals.back().truncated()) {
      mu.warnings.push_back("radial proposal truncated at r = " + std::to_string(proposals.back().rmax()) +
                            " in factor " + std::to_string(i));
    }
  }
  check_frame(frame, dims);

  const std::size_t orbit = std::size_t{1} << k;
  const std::size_t total = antithetic_size(n, k);
  for (int d : dims) {
    mu.points.emplace_back(d + 1, static_cast<Eigen::Index>(total));
  }
  Vec log_w(static_cast<Eigen::Index>(total));

  parallel_for(total / orbit, kChunk / orbit, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> radius(k);
    std::vector<Vec> dir(k);
    Vec local;
    Vec image;
    for (std::size_t b = b0; b < b1; ++b) {
      CounterRng rng(seed, streams::kInteriorProposal, b);
      double log_common = 0.0;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        double log_q = 0.0;
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        radius[i] = proposals[i].sample(u1, u2, log_q);
        dir[i].resize(dims[i]);
        fill_direction(rng, dir[i]);
        if (frame) {
          dir[i] = (*frame)[i] * dir[i];
        }
        const double beta_r = metric.scale(i) * radius[i];
        dist2 += beta_r * beta_r;
        log_common += (dims[i] - 1) * RadialProposal::log_sinh(radius[i]) - log_q;
      }
      const double lw = -s * std::sqrt(dist2) + log_common;
      for (std::size_t pattern = 0; pattern < orbit; ++pattern) {
        const auto col = static_cast<Eigen::Index>(b * orbit + pattern);
        log_w(col) = lw;
        for (std::size_t i = 0; i < k; ++i) {
          const double sign = ((pattern >> i) & 1U) != 0U ? -1.0 : 1.0;
          local.resize(dims[i] + 1);
          image.resize(dims[i] + 1);
          local(0) = std::cosh(radius[i]);
          local.tail(dims[i]) = (sign * std::sinh(radius[i])) * dir[i];
          hyperbolic::boost_apply(y.factor(i), local, image);
          image(0) = std::sqrt(1.0 + image.tail(dims[i]).squaredNorm());
          mu.points[i].col(col) = image;
        }
      }
    }
  });

  const double top = log_w.maxCoeff();
  Vec w = (log_w.array() - top).exp().matrix();
  const double mean = w.mean();
  double log_const = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    log_const += log_unit_sphere(dims[i] - 1) + dims[i] * std::log(metric.scale(i));
  }
  mu.log_normalizer = top + std::log(mean) + log_const;
  mu.weights = w / w.sum();
  mu.s = s;
  mu.y = y;
  mu.seed = seed;
  mu.ess = effective_sample_size(mu.weights);
  if (mu.ess < default_tolerances().ess_fraction * static_cast<double>(total)) {
    mu.warnings.push_back(degeneracy_warning("interior sample", mu.ess, total));
  }
  return mu;
}

AtomicBoundaryMeasure convolve_sigma(const AtomicInteriorMeasure& mu, std::size_t n_theta, std::uint64_t seed,
                                     const FrameRotation& frame) {
  if (n_theta < 1 || mu.size() < 1) {
    throw ConfigError("convolution needs at least one atom on each side");
  }
  const std::size_t k = mu.points.size();
  std::vector<int> dims;
  for (const auto& p : mu.points) {
    dims.push_back(static_cast<int>(p.rows()) - 1);
  }
  check_frame(frame, dims);
  const std::size_t per_z = antithetic_size(n_theta, k);
  const std::size_t orbit = std::size_t{1} << k;
  const std::size_t total = per_z * mu.size();
  std::vector<Mat> dirs;
  for (int d : dims) {
    dirs.emplace_back(d, static_cast<Eigen::Index>(total));
  }
  Vec weights(static_cast<Eigen::Index>(total));

  parallel_for(mu.size(), std::max<std::size_t>(1, kChunk / per_z), [&](std::size_t m0, std::size_t m1) {
    Vec dir;
    Vec ell;
    Vec out;
    for (std::size_t m = m0; m < m1; ++m) {
      const double wz = mu.weights(static_cast<Eigen::Index>(m)) / static_cast<double>(per_z);
      for (std::size_t b = 0; b < per_z / orbit; ++b) {
        CounterRng rng(seed, kSigmaStream, static_cast<std::uint64_t>(m) * (per_z / orbit) + b);
        for (std::size_t i = 0; i < k; ++i) {
          dir.resize(dims[i]);
          fill_direction(rng, dir);
          if (frame) {
            dir = (*frame)[i] * dir;
          }
          const Vec z = mu.points[i].col(static_cast<Eigen::Index>(m));
          ell.resize(dims[i] + 1);
          out.resize(dims[i] + 1);
          for (std::size_t pattern = 0; pattern < orbit; ++pattern) {
            const double sign = ((pattern >> i) & 1U) != 0U ? -1.0 : 1.0;
            ell(0) = 1.0;
            ell.tail(dims[i]) = sign * dir;
            hyperbolic::boost_apply(z, ell, out);
            const auto col = static_cast<Eigen::Index>(m * per_z + b * orbit + pattern);
            dirs[i].col(col) = out.tail(dims[i]).normalized();
            weights(col) = wz;
          }
        }
      }
    }
  });

  AtomicBoundaryMeasure sigma(std::move(dirs), std::move(weights), Provenance::Sigma, seed);
  sigma.set_origin(mu.y, mu.s);
  for (const auto& w : mu.warnings) {
    sigma.add_warning(w);
  }
  return sigma;
}

AtomicBoundaryMeasure convolve_sigma(const ScaledProductMetric& metric, const ProductPoint& y, double s,
                                     std::size_t n_z, std::size_t n_theta, std::uint64_t seed,
                                     const FrameRotation& frame) {
  return convolve_sigma(sample_mu(metric, y, s, n_z, seed, frame), n_theta, seed, frame);
}

Mat random_rotation(int n, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, streams::kTestScenario + 1, index);
  Mat g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      g(r, c) = rng.normal();
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat rr = qr.matrixQR();
  for (int c = 0; c < n; ++c) {
    if (rr(c, c) < 0.0) {
      q.col(c) *= -1.0;
    }
  }
  return q;
}

ProductPoint sample_ball_point(const ScaledProductMetric& metric, double radius, std::uint64_t seed,
                               std::uint64_t index) {
  if (!(radius >= 0.0)) {
    throw ConfigError("sampling radius must be non-negative");
  }
  CounterRng rng(seed, streams::kScanPoints, index);
  const std::size_t k = metric.rank();
  const double rho = radius * rng.uniform();
  Vec split(static_cast<Eigen::Index>(k));
  for (auto& w : split) {
    w = std::abs(rng.normal());
  }
  split /= split.norm();
  std::vector<Vec> coords;
  for (std::size_t i = 0; i < k; ++i) {
    const int n = metric.factor(i).n;
    Vec dir(n);
    for (auto& u : dir) {
      u = rng.normal();
    }
    dir.normalize();
    const double r = rho * split(static_cast<Eigen::Index>(i)) / metric.scale(i);
    Vec x(n + 1);
    x(0) = std::cosh(r);
    x.tail(n) = std::sinh(r) * dir;
    coords.push_back(x);
  }
  return ProductPoint(coords);
}

}  // namespace minent
