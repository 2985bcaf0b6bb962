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

#ifndef MINENT_MEASURES_HPP
#define MINENT_MEASURES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minent/geometry.hpp"

namespace minent {

enum class Provenance { PattersonSullivan, Sigma, Custom };

/// Weighted atoms on the Furstenberg boundary.
///
/// Atom j has direction `directions(i).col(j)` in factor i. Weights are
/// normalized on construction.
class AtomicBoundaryMeasure {
 public:
  AtomicBoundaryMeasure(std::vector<Mat> directions, Vec weights, Provenance provenance = Provenance::Custom,
                        std::uint64_t seed = 0);

  static AtomicBoundaryMeasure dirac(const FurstenbergPoint& theta);
  static AtomicBoundaryMeasure from_atoms(const std::vector<FurstenbergPoint>& atoms, const Vec& weights);
  /// (1 - t) a + t b.
  static AtomicBoundaryMeasure mixture(const AtomicBoundaryMeasure& a, const AtomicBoundaryMeasure& b, double t);

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  std::size_t rank() const noexcept { return directions_.size(); }
  const Mat& directions(std::size_t factor) const { return directions_.at(factor); }
  const Vec& weights() const noexcept { return weights_; }
  FurstenbergPoint atom(std::size_t j) const;

  Provenance provenance() const noexcept { return provenance_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double ess() const noexcept { return ess_; }
  /// Center x of a Patterson-Sullivan sample, or y of a convolved measure.
  const std::optional<ProductPoint>& center() const noexcept { return center_; }
  const std::optional<double>& exponent() const noexcept { return exponent_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  void set_origin(std::optional<ProductPoint> center, std::optional<double> exponent);
  void add_warning(std::string warning) { warnings_.push_back(std::move(warning)); }

  AtomicBoundaryMeasure pushforward(const ProductIsometry& g) const;

 private:
  std::vector<Mat> directions_;
  Vec weights_;
  Provenance provenance_;
  std::uint64_t seed_;
  double ess_ = 0.0;
  std::optional<ProductPoint> center_;
  std::optional<double> exponent_;
  std::vector<std::string> warnings_;
};

/// Weighted atoms in the interior, the sampled form of mu_y^s.
struct AtomicInteriorMeasure {
  std::vector<Mat> points;  // factor i: (n_i + 1) x N
  Vec weights;
  double s = 0.0;
  ProductPoint y;
  std::uint64_t seed = 0;
  double ess = 0.0;
  /// Estimate of log int e^{-s d(y, z)} dvol(z).
  double log_normalizer = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights.size()); }
  ProductPoint atom(std::size_t j) const;
};

/// (sum w)^2 / sum w^2.
double effective_sample_size(const Vec& weights);

/// log d(nu_x)/d(nu_p)(theta) = -sum h_i B_i(x_i, theta_i), real factors (h_i = n_i - 1).
double ps_log_density(const ProductPoint& x, const FurstenbergPoint& theta);

enum class PsScheme {
  /// Uniform atoms reweighted by the density; degrades as x leaves p.
  ImportanceUniform,
  /// Uniform atoms pushed forward by the canonical boost to x; exact.
  Transported,
};

/// Sample sizes are rounded up to a multiple of 2^k: atoms come in sign-flip
/// orbits, which makes samples at the basepoint exactly symmetric.
std::size_t antithetic_size(std::size_t n, std::size_t rank);

/// Uniform antithetic cloud on the product of spheres, n_i x N per factor.
std::vector<Mat> uniform_boundary_cloud(const std::vector<int>& dims, std::size_t n, std::uint64_t seed,
                                        std::uint32_t stream, std::uint64_t index_offset = 0);

AtomicBoundaryMeasure sample_ps(const ProductPoint& x, std::size_t n, std::uint64_t seed,
                                PsScheme scheme = PsScheme::ImportanceUniform);

/// Weight of atoms within `angle` of theta0 in every factor.
double cap_mass(const AtomicBoundaryMeasure& measure, const FurstenbergPoint& theta0, double angle);

struct CapEstimate {
  double mass = 0.0;
  double std_error = 0.0;
};
CapEstimate cap_mass_estimate(const AtomicBoundaryMeasure& measure, const FurstenbergPoint& theta0, double angle);

/// Optional per-factor rotation applied to the reference directions before
/// transport; sampling at R y with rotation R reproduces R applied to the
/// sample at y, atom by atom.
using FrameRotation = std::optional<std::vector<Mat>>;

/// Weighted sample of mu_y^s with density proportional to e^{-s d(y, z)}.
/// ParameterError unless s > h(g_beta).
AtomicInteriorMeasure sample_mu(const ScaledProductMetric& metric, const ProductPoint& y, double s, std::size_t n,
                                std::uint64_t seed, const FrameRotation& frame = std::nullopt);

/// sigma_y^s: n_theta atoms of nu_z per atom z of mu_y^s, each with weight w_z / n_theta.
AtomicBoundaryMeasure convolve_sigma(const AtomicInteriorMeasure& mu, std::size_t n_theta, std::uint64_t seed,
                                     const FrameRotation& frame = std::nullopt);
AtomicBoundaryMeasure convolve_sigma(const ScaledProductMetric& metric, const ProductPoint& y, double s,
                                     std::size_t n_z, std::size_t n_theta, std::uint64_t seed,
                                     const FrameRotation& frame = std::nullopt);

/// Draws a uniformly random rotation of R^n.
Mat random_rotation(int n, std::uint64_t seed, std::uint64_t index);

/// Point at g-distance at most `radius` from the basepoint, drawn from the
/// scan-point stream.
ProductPoint sample_ball_point(const ScaledProductMetric& metric, double radius, std::uint64_t seed,
                               std::uint64_t index);

}  // namespace minent

#endif  // MINENT_MEASURES_HPP
