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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "minent/entropy.hpp"
#include "minent/errors.hpp"
#include "minent/measures.hpp"
#include "minent/parallel.hpp"
#include "minent/serialization.hpp"
#include "oracles.hpp"

namespace minent {
namespace {

const std::vector<FactorSpec> kH3H3{{3, 1}, {3, 1}};
const std::vector<FactorSpec> kH3{{3, 1}};

FurstenbergPoint axis_point(const std::vector<FactorSpec>& factors, int axis, double sign = 1.0) {
  std::vector<Vec> dirs;
  for (const auto& f : factors) {
    Vec t = Vec::Zero(f.n);
    t(axis) = sign;
    dirs.push_back(t);
  }
  return FurstenbergPoint(dirs);
}

ProductPoint along(const std::vector<FactorSpec>& factors, const FurstenbergPoint& theta, double r) {
  std::vector<Vec> coords;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Vec x(factors[i].n + 1);
    x(0) = std::cosh(r);
    x.tail(factors[i].n) = std::sinh(r) * theta.factor(i);
    coords.push_back(x);
  }
  return ProductPoint(coords);
}

bool identical(const AtomicBoundaryMeasure& a, const AtomicBoundaryMeasure& b) {
  if (a.size() != b.size() || a.weights() != b.weights()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.directions(i) != b.directions(i)) {
      return false;
    }
  }
  return true;
}

/// Two-sample z statistic of cap masses.
double cap_z(const AtomicBoundaryMeasure& a, const AtomicBoundaryMeasure& b, const FurstenbergPoint& c, double angle) {
  const auto ea = cap_mass_estimate(a, c, angle);
  const auto eb = cap_mass_estimate(b, c, angle);
  return (ea.mass - eb.mass) / std::sqrt(ea.std_error * ea.std_error + eb.std_error * eb.std_error);
}

TEST(PsDensityTest, VanishesAtBasepointAndIsACocycle) {
  CounterRng rng(40, streams::kTestScenario, 0);
  const auto p = ProductPoint::basepoint(kH3H3);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto theta = oracle::random_boundary(kH3H3, rng);
    EXPECT_EQ(ps_log_density(p, theta), 0.0);
    const auto x = oracle::random_point(kH3H3, rng, 3.0);
    const auto y = oracle::random_point(kH3H3, rng, 3.0);
    // log dnu_x/dnu_p = log dnu_x/dnu_y + log dnu_y/dnu_p
    double x_over_y = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      x_over_y -= 2.0 * factor_busemann(y.factor(i), x.factor(i), theta.factor(i));
    }
    EXPECT_NEAR(ps_log_density(x, theta), x_over_y + ps_log_density(y, theta), 1e-10);
  }
}

TEST(PsDensityTest, IsTheEntropyMultipleOfTheWeightedBusemannAtOptimum) {
  const std::vector<FactorSpec> factors{{3, 1}, {5, 1}};
  const auto g = minimal_entropy_metric(factors);
  const double h_min = optimal_scales(factors).h_min;
  CounterRng rng(41, streams::kTestScenario, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = oracle::random_point(factors, rng, 2.0);
    const auto theta = oracle::random_boundary(factors, rng);
    EXPECT_NEAR(ps_log_density(x, theta), -h_min * weighted_busemann(g, x, theta), 1e-10);
  }
}

TEST(PsDensityTest, HasUnitTotalMass) {
  const std::size_t n = 100000;
  const auto x = along(kH3H3, axis_point(kH3H3, 0), 0.3);
  const auto cloud = uniform_boundary_cloud({3, 3}, n, 42, streams::kBoundaryReference);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < cloud[0].cols(); ++j) {
    sum += std::exp(ps_log_density(x, FurstenbergPoint({cloud[0].col(j), cloud[1].col(j)}, 1e-9)));
  }
  EXPECT_NEAR(sum / static_cast<double>(cloud[0].cols()), 1.0, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(SamplePsTest, UniformAtBasepointAndDeterministic) {
  const auto p = ProductPoint::basepoint(kH3H3);
  const auto m = sample_ps(p, 1000, 7);
  EXPECT_EQ(m.size(), 1000U);
  for (Eigen::Index j = 0; j < m.weights().size(); ++j) {
    EXPECT_DOUBLE_EQ(m.weights()(j), 1.0 / 1000.0);
  }
  EXPECT_TRUE(identical(m, sample_ps(p, 1000, 7)));
  EXPECT_FALSE(identical(m, sample_ps(p, 1000, 8)));
  EXPECT_EQ(sample_ps(p, 1001, 7).size(), 1004U);
}

TEST(SamplePsTest, BitIdenticalAcrossThreadCounts) {
  const auto x = along(kH3H3, axis_point(kH3H3, 1), 0.7);
  set_thread_count(1);
  const auto a = sample_ps(x, 50000, 3);
  set_thread_count(4);
  const auto b = sample_ps(x, 50000, 3);
  set_thread_count(1);
  EXPECT_TRUE(identical(a, b));
}

TEST(SamplePsTest, FullSupportOnCapGrid) {
  const auto x = along(kH3H3, axis_point(kH3H3, 2), 3.0 / std::sqrt(2.0));
  const auto m = sample_ps(x, 100000, 9);
  for (int a0 = 0; a0 < 3; ++a0) {
    for (int a1 = 0; a1 < 3; ++a1) {
      for (double s0 : {-1.0, 1.0}) {
        for (double s1 : {-1.0, 1.0}) {
          Vec t0 = Vec::Zero(3);
          Vec t1 = Vec::Zero(3);
          t0(a0) = s0;
          t1(a1) = s1;
          EXPECT_GT(cap_mass(m, FurstenbergPoint({t0, t1}), 0.5), 0.0);
        }
      }
    }
  }
}

TEST(SamplePsTest, EquivariantUnderFactorRotations) {
  const auto x = along(kH3H3, axis_point(kH3H3, 0), 0.8);
  const auto R = ProductIsometry::rotation({random_rotation(3, 1, 0), random_rotation(3, 1, 1)});
  const auto direct = sample_ps(R.apply(x), 100000, 11);
  const auto pushed = sample_ps(x, 100000, 12).pushforward(R);
  const auto center = R.apply(axis_point(kH3H3, 0));
  // Bonferroni over 4 caps at the 5% level.
  for (double angle : {0.4, 0.8, 1.2, 2.0}) {
    EXPECT_LT(std::abs(cap_z(direct, pushed, center, angle)), 2.5) << "angle " << angle;
  }
}

TEST(SamplePsTest, TransportedSchemeMatchesImportanceScheme) {
  const auto x = along(kH3H3, axis_point(kH3H3, 0), 0.6);
  const auto is = sample_ps(x, 100000, 13);
  const auto tr = sample_ps(x, 100000, 14, PsScheme::Transported);
  for (double angle : {0.3, 0.7, 1.5}) {
    EXPECT_LT(std::abs(cap_z(is, tr, axis_point(kH3H3, 0), angle)), 2.5);
  }
}

TEST(SamplePsTest, WarnsWhenImportanceWeightsDegenerate) {
  const auto x = along(kH3H3, axis_point(kH3H3, 0), 6.0);
  const auto m = sample_ps(x, 10000, 15);
  ASSERT_FALSE(m.warnings().empty());
  EXPECT_NE(m.warnings().front().find("DegenerateSampling"), std::string::npos);
  EXPECT_TRUE(sample_ps(x, 10000, 15, PsScheme::Transported).warnings().empty());
}

TEST(CapMassTest, UniformHemispheresAndFullAngle) {
  const auto m = sample_ps(ProductPoint::basepoint(kH3H3), 100000, 16);
  const auto est = cap_mass_estimate(m, axis_point(kH3H3, 2), std::numbers::pi / 2);
  EXPECT_NEAR(est.mass, 0.25, 3.0 * est.std_error + 1e-12);
  EXPECT_NEAR(cap_mass(m, axis_point(kH3H3, 2), std::numbers::pi - 1e-9), 1.0, 1e-10);
  EXPECT_THROW(cap_mass(m, axis_point(kH3H3, 2), 0.0), ConfigError);
  EXPECT_THROW(cap_mass(m, axis_point(kH3H3, 2), 4.0), ConfigError);
}

TEST(CapMassTest, ConcentratesAlongRegularRay) {
  const auto theta0 = axis_point(kH3H3, 0);
  double prev = 0.0;
  double prev_err = 0.0;
  for (double t : {1.0, 2.0, 4.0, 8.0}) {
    const auto m = sample_ps(along(kH3H3, theta0, t / std::sqrt(2.0)), 100000, 17, PsScheme::Transported);
    const auto est = cap_mass_estimate(m, theta0, 0.2);
    EXPECT_GE(est.mass, prev - 3.0 * std::hypot(est.std_error, prev_err));
    prev = est.mass;
    prev_err = est.std_error;
  }
  EXPECT_GE(prev, 0.95);
}

TEST(SampleMuTest, NormalizedAndRejectsSmallExponent) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto y = ProductPoint::basepoint(kH3H3);
  const auto mu = sample_mu(g, y, 1.1 * g.entropy(), 4000, 1);
  EXPECT_NEAR(mu.weights.sum(), 1.0, 1e-12);
  EXPECT_GT(mu.ess, 0.0);
  EXPECT_THROW(sample_mu(g, y, g.entropy(), 100, 1), ParameterError);
  EXPECT_THROW(sample_mu(g, y, 0.9 * g.entropy(), 100, 1), ParameterError);
}

TEST(SampleMuTest, ConcentratesAtLargeExponent) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  CounterRng rng(43, streams::kTestScenario, 0);
  const auto y = oracle::random_point(kH3H3, rng, 1.0);
  const auto mu = sample_mu(g, y, 50.0, 20000, 2);
  double mean = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    mean += mu.weights(static_cast<Eigen::Index>(j)) * product_distance(g, y, mu.atom(j));
  }
  EXPECT_LT(mean, 0.2);
}

TEST(SampleMuTest, NormalizerMatchesPolarIdentityInH3) {
  const auto g = ScaledProductMetric::unscaled(kH3);
  for (double s : {2.5, 3.0, 5.0}) {
    const auto mu = sample_mu(g, ProductPoint::basepoint(kH3), s, 100000, 3);
    const double closed = oracle::h3_exponential_integral(s);
    EXPECT_NEAR(oracle::h3_polar_identity(s) / closed, 1.0, 1e-8);
    EXPECT_NEAR(std::exp(mu.log_normalizer) / closed, 1.0, 0.02) << "s = " << s;
  }
}

TEST(SampleMuTest, EquivariantWithFrameRotation) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  CounterRng rng(44, streams::kTestScenario, 0);
  const auto y = oracle::random_point(kH3H3, rng, 1.5);
  const std::vector<Mat> rot{random_rotation(3, 2, 0), random_rotation(3, 2, 1)};
  const auto R = ProductIsometry::rotation(rot);
  const auto a = sample_mu(g, y, 4.0, 2000, 5);
  const auto b = sample_mu(g, R.apply(y), 4.0, 2000, 5, rot);
  EXPECT_EQ(a.weights, b.weights);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT((R.factor(i) * a.points[i] - b.points[i]).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SampleMuTest, BitIdenticalAcrossThreadCounts) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto y = ProductPoint::basepoint(kH3H3);
  set_thread_count(1);
  const auto a = sample_mu(g, y, 3.5, 30000, 6);
  set_thread_count(3);
  const auto b = sample_mu(g, y, 3.5, 30000, 6);
  set_thread_count(1);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.points[0], b.points[0]);
  EXPECT_EQ(a.points[1], b.points[1]);
  EXPECT_EQ(a.log_normalizer, b.log_normalizer);
}

TEST(ConvolveSigmaTest, UnitMassAndIsotropyAtBasepoint) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto sigma = convolve_sigma(g, ProductPoint::basepoint(kH3H3), 4.0, 500, 64, 7);
  EXPECT_NEAR(sigma.weights().sum(), 1.0, 1e-12);
  EXPECT_EQ(sigma.provenance(), Provenance::Sigma);
  for (int axis = 0; axis < 3; ++axis) {
    for (double angle : {0.5, 1.0}) {
      const auto est = cap_mass_estimate(sigma, axis_point(kH3H3, axis), angle);
      EXPECT_NEAR(est.mass, cap_mass(sigma, axis_point(kH3H3, axis, -1.0), angle), 3.0 * est.std_error + 1e-12);
    }
  }
}

TEST(ConvolveSigmaTest, ApproachesPattersonSullivanAtLargeExponent) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto y = along(kH3H3, axis_point(kH3H3, 1), 0.8);
  const auto sigma = convolve_sigma(g, y, 200.0, 2000, 64, 8);
  const auto nu = sample_ps(y, 128000, 9, PsScheme::Transported);
  for (double angle : {0.5, 1.0, 1.5}) {
    EXPECT_LT(std::abs(cap_z(sigma, nu, axis_point(kH3H3, 1), angle)), 2.5);
  }
}

TEST(BallPointTest, StaysInsideRadiusAndIsSeeded) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto p = ProductPoint::basepoint(kH3H3);
  double farthest = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto y = sample_ball_point(g, 2.0, 5, i);
    farthest = std::max(farthest, product_distance(g, p, y));
  }
  EXPECT_LE(farthest, 2.0 + 1e-12);
  EXPECT_GT(farthest, 1.5);
  EXPECT_EQ(sample_ball_point(g, 2.0, 5, 3).factor(1), sample_ball_point(g, 2.0, 5, 3).factor(1));
  EXPECT_THROW(sample_ball_point(g, -1.0, 5, 0), ConfigError);
}

TEST(MeasureIoTest, JsonLinesRoundTrip) {
  const auto m = sample_ps(along(kH3H3, axis_point(kH3H3, 0), 0.5), 64, 10);
  std::stringstream ss;
  write_measure_jsonl(ss, m);
  const auto back = read_measure_jsonl(ss);
  ASSERT_EQ(back.size(), m.size());
  EXPECT_LT((back.weights() - m.weights()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((back.directions(1) - m.directions(1)).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace minent
