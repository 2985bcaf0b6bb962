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

#include "minent/entropy.hpp"
#include "minent/errors.hpp"
#include "minent/geometry.hpp"
#include "oracles.hpp"

namespace minent {
namespace {

using oracle::random_boundary;
using oracle::random_point;

const std::vector<FactorSpec> kH3H3{{3, 1}, {3, 1}};
const std::vector<FactorSpec> kH3H4{{3, 1}, {4, 1}};

TEST(FactorSpecTest, ValidatesDimensionAndAlgebra) {
  EXPECT_EQ(FactorSpec(3, 1).h(), 2);
  EXPECT_EQ(FactorSpec(4, 2).h(), 4);
  EXPECT_EQ(FactorSpec(8, 4).h(), 10);
  EXPECT_THROW(FactorSpec(2, 1), ConfigError);
  EXPECT_THROW(FactorSpec(3, 2), ConfigError);
  EXPECT_THROW(FactorSpec(6, 4), ConfigError);
  EXPECT_THROW(FactorSpec(4, 3), ConfigError);
}

TEST(ScaledProductMetricTest, CentroidWeightsAreUnitAndMatchDimensionsAtOptimum) {
  const auto g = minimal_entropy_metric(kH3H4);
  double sum = 0.0;
  for (double c : g.centroid_weights()) {
    sum += c * c;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(g.centroid_weights()[0], std::sqrt(3.0 / 7.0), 1e-12);
  EXPECT_NEAR(g.centroid_weights()[1], std::sqrt(4.0 / 7.0), 1e-12);
}

TEST(ScaledProductMetricTest, RejectsBadScalesAndWeights) {
  EXPECT_THROW(ScaledProductMetric(kH3H3, {1.0}), ConfigError);
  EXPECT_THROW(ScaledProductMetric(kH3H3, {1.0, -1.0}), ConfigError);
  EXPECT_THROW(ScaledProductMetric::with_centroid_weights(kH3H3, {1.0, 1.0}, {0.5, 0.5}), ConfigError);
  EXPECT_NO_THROW(ScaledProductMetric::with_centroid_weights(kH3H3, {1.0, 1.0}, {0.6, 0.8}));
}

TEST(FactorDistanceTest, TrivialCases) {
  Vec p = Vec::Zero(4);
  p(0) = 1.0;
  EXPECT_EQ(factor_distance(p, p), 0.0);
  Vec y(4);
  y << std::cosh(1.0), std::sinh(1.0), 0.0, 0.0;
  EXPECT_NEAR(factor_distance(p, y), 1.0, 1e-15);
  EXPECT_NEAR(factor_distance(y, p), 1.0, 1e-15);
}

TEST(FactorDistanceTest, RejectsPointsOffTheHyperboloid) {
  Vec p = Vec::Zero(4);
  p(0) = 1.0;
  Vec bad = Vec::Zero(4);
  bad(0) = 0.5;
  EXPECT_THROW(factor_distance(p, bad), InvalidPoint);
  EXPECT_THROW(ProductPoint({bad}), InvalidPoint);
}

TEST(FactorDistanceTest, TriangleInequalityOnRandomTriples) {
  CounterRng rng(11, streams::kTestScenario, 0);
  const std::vector<FactorSpec> f{{5, 1}};
  for (int trial = 0; trial < 10000; ++trial) {
    const auto x = random_point(f, rng, 6.0).factor(0);
    const auto y = random_point(f, rng, 6.0).factor(0);
    const auto z = random_point(f, rng, 6.0).factor(0);
    EXPECT_LE(factor_distance(x, z), factor_distance(x, y) + factor_distance(y, z) + 1e-10);
  }
}

TEST(ProductDistanceTest, PythagoreanCombination) {
  auto along = [](double t) {
    Vec v = Vec::Zero(4);
    v(0) = std::cosh(t);
    v(1) = std::sinh(t);
    return v;
  };
  const ProductPoint p = ProductPoint::basepoint(kH3H3);
  const ProductPoint x({along(3.0), along(4.0)});
  EXPECT_NEAR(product_distance(ScaledProductMetric::unscaled(kH3H3), p, x), 5.0, 1e-12);
  const ProductPoint y({along(1.0), along(1.0)});
  EXPECT_NEAR(product_distance(ScaledProductMetric(kH3H3, {2.0, 1.0}), p, y), std::sqrt(5.0), 1e-12);
  EXPECT_EQ(product_distance(ScaledProductMetric(kH3H3, {2.0, 1.0}), y, y), 0.0);
}

TEST(ProductDistanceTest, ShapeMismatchThrows) {
  const auto p = ProductPoint::basepoint(kH3H4);
  EXPECT_THROW(product_distance(ScaledProductMetric::unscaled(kH3H3), p, p), ShapeError);
}

TEST(ProductDistanceTest, SymmetryAndTriangleInequality) {
  const ScaledProductMetric g(kH3H4, {1.3, 0.7});
  CounterRng rng(12, streams::kTestScenario, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto x = random_point(kH3H4, rng, 4.0);
    const auto y = random_point(kH3H4, rng, 4.0);
    const auto z = random_point(kH3H4, rng, 4.0);
    EXPECT_NEAR(product_distance(g, x, y), product_distance(g, y, x), 1e-12);
    EXPECT_LE(product_distance(g, x, z), product_distance(g, x, y) + product_distance(g, y, z) + 1e-10);
  }
}

TEST(ExpLogTest, TrivialCases) {
  const auto g = ScaledProductMetric::unscaled({{3, 1}});
  const auto p = ProductPoint::basepoint(g.factors());
  TangentVector zero{p, {Vec::Zero(4)}};
  EXPECT_EQ((exp_map(g, p, zero).factor(0) - p.factor(0)).norm(), 0.0);
  Vec e1 = Vec::Zero(4);
  e1(1) = 1.0;
  const auto y = exp_map(g, p, TangentVector{p, {e1}});
  EXPECT_NEAR(y.factor(0)(0), std::cosh(1.0), 1e-14);
  EXPECT_NEAR(y.factor(0)(1), std::sinh(1.0), 1e-14);
}

TEST(ExpLogTest, RoundTripAndNorm) {
  const ScaledProductMetric g(kH3H4, {1.3, 0.8});
  CounterRng rng(13, streams::kTestScenario, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = random_point(kH3H4, rng, 3.0);
    Vec zeta(g.dimension());
    for (int j = 0; j < zeta.size(); ++j) {
      zeta(j) = rng.normal();
    }
    zeta *= 5.0 * rng.uniform() / zeta.norm();
    const auto y = exp_orthonormal(g, x, zeta);
    const Vec back = log_orthonormal(g, x, y);
    worst = std::max(worst, (back - zeta).norm());
    EXPECT_NEAR(back.norm(), product_distance(g, x, y), 1e-9);
    EXPECT_NEAR(tangent_norm(g, from_orthonormal(g, x, zeta)), zeta.norm(), 1e-9);
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(BallModelTest, RoundTrip) {
  CounterRng rng(14, streams::kTestScenario, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_point(kH3H4, rng, 5.0);
    const auto back = ProductPoint::from_ball(x.to_ball());
    for (std::size_t i = 0; i < x.rank(); ++i) {
      EXPECT_LT((back.factor(i) - x.factor(i)).norm(), 1e-9 * x.factor(i)(0));
    }
  }
}

TEST(BusemannTest, BasepointRayAndBallForm) {
  Vec p = Vec::Zero(4);
  p(0) = 1.0;
  Vec theta(3);
  theta << 0.0, 0.6, 0.8;
  EXPECT_EQ(factor_busemann(p, theta), 0.0);
  for (double t : {0.5, 1.0, 3.0, 10.0}) {
    Vec x(4);
    x(0) = std::cosh(t);
    x.tail(3) = std::sinh(t) * theta;
    EXPECT_NEAR(factor_busemann(x, theta), -t, 1e-12);
  }
  // Ball point 0.5 theta: closed form, ball form and the limit definition agree.
  const Vec u = 0.5 * theta;
  const Vec x = hyperbolic::from_ball(u);
  EXPECT_NEAR(factor_busemann(x, theta), -std::log(3.0), 1e-12);
  EXPECT_NEAR(oracle::ball_busemann(u, theta), -std::log(3.0), 1e-12);
  EXPECT_NEAR(oracle::limit_busemann(x, theta), -std::log(3.0), 1e-8);
  EXPECT_NEAR(factor_distance(p, x), std::log(3.0), 1e-12);
}

TEST(BusemannTest, MatchesLimitDefinitionAndBallForm) {
  CounterRng rng(15, streams::kTestScenario, 0);
  const std::vector<FactorSpec> f{{6, 1}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = random_point(f, rng, 4.0).factor(0);
    const Vec theta = oracle::random_unit(6, rng);
    EXPECT_NEAR(factor_busemann(x, theta), oracle::limit_busemann(x, theta), 1e-8);
    EXPECT_NEAR(factor_busemann(x, theta), oracle::ball_busemann(hyperbolic::to_ball(x), theta), 1e-9);
  }
}

TEST(BusemannTest, CocycleAndLipschitz) {
  CounterRng rng(16, streams::kTestScenario, 0);
  const std::vector<FactorSpec> f{{4, 1}};
  Vec p = Vec::Zero(5);
  p(0) = 1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto x = random_point(f, rng, 5.0).factor(0);
    const auto y = random_point(f, rng, 5.0).factor(0);
    const Vec theta = oracle::random_unit(4, rng);
    EXPECT_NEAR(factor_busemann(p, x, theta) + factor_busemann(x, y, theta), factor_busemann(p, y, theta), 1e-10);
    EXPECT_LE(std::abs(factor_busemann(x, theta) - factor_busemann(y, theta)), factor_distance(x, y) + 1e-10);
  }
}

TEST(BusemannTest, InvariantUnderIsometries) {
  CounterRng rng(17, streams::kTestScenario, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_point(kH3H4, rng, 3.0);
    const auto y = random_point(kH3H4, rng, 3.0);
    const auto a = random_point(kH3H4, rng, 3.0);
    const auto theta = random_boundary(kH3H4, rng);
    const auto g = ProductIsometry::translation(a);
    const auto gx = g.apply(x);
    const auto gy = g.apply(y);
    const auto gtheta = g.apply(theta);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_NEAR(factor_busemann(gx.factor(i), gy.factor(i), gtheta.factor(i)),
                  factor_busemann(x.factor(i), y.factor(i), theta.factor(i)), 1e-9);
    }
    const auto ginv = g.inverse();
    const auto back = ginv.apply(gx);
    EXPECT_LT(product_distance(ScaledProductMetric::unscaled(kH3H4), back, x), 1e-8);
  }
}

TEST(WeightedBusemannTest, VanishesAtBasepointAndRejectsComplexFactors) {
  const auto g = minimal_entropy_metric(kH3H4);
  CounterRng rng(18, streams::kTestScenario, 0);
  const auto theta = random_boundary(kH3H4, rng);
  EXPECT_EQ(weighted_busemann(g, ProductPoint::basepoint(kH3H4), theta), 0.0);
  const ScaledProductMetric complex({{4, 2}}, {1.0});
  Vec p = Vec::Zero(5);
  p(0) = 1.0;
  Vec t = Vec::Zero(4);
  t(0) = 1.0;
  EXPECT_THROW(weighted_busemann(complex, ProductPoint({p}), FurstenbergPoint({t})), ConfigError);
}

TEST(WeightedBusemannTest, GradientHasUnitNorm) {
  for (const auto& factors : {kH3H3, kH3H4, std::vector<FactorSpec>{{3, 1}, {5, 1}, {8, 1}}}) {
    const auto g = minimal_entropy_metric(factors);
    CounterRng rng(19, streams::kTestScenario, factors.size());
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = random_point(factors, rng, 4.0);
      const auto theta = random_boundary(factors, rng);
      const auto jet = weighted_busemann_jet(g, x, theta);
      EXPECT_NEAR(jet.gradient.norm(), 1.0, 1e-10);
      EXPECT_NEAR(tangent_norm(g, weighted_busemann_gradient(g, x, theta)), 1.0, 1e-10);
    }
  }
}

TEST(WeightedBusemannTest, HessianMatchesFiniteDifferencesAndIsPsd) {
  const auto g = minimal_entropy_metric(kH3H4);
  CounterRng rng(20, streams::kTestScenario, 0);
  double worst_hess = 0.0;
  double worst_grad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_point(kH3H4, rng, 2.0);
    const auto theta = random_boundary(kH3H4, rng);
    const auto jet = weighted_busemann_jet(g, x, theta);
    auto f = [&](const Vec& zeta) { return weighted_busemann(g, exp_orthonormal(g, x, zeta), theta); };
    worst_hess = std::max(worst_hess, (oracle::fd_hessian(f, g.dimension(), 1e-4) - jet.hessian).cwiseAbs().maxCoeff());
    worst_grad = std::max(worst_grad, (oracle::fd_gradient(f, g.dimension(), 1e-5) - jet.gradient).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> eig(jet.hessian);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
    EXPECT_LT((jet.hessian * jet.gradient).norm(), 1e-12);
  }
  EXPECT_LT(worst_hess, 1e-5);
  EXPECT_LT(worst_grad, 1e-8);
}

TEST(WeightedBusemannTest, BasepointShiftAddsAConstant) {
  const auto g = minimal_entropy_metric(kH3H3);
  CounterRng rng(21, streams::kTestScenario, 0);
  const auto q = random_point(kH3H3, rng, 2.0);
  const auto theta = random_boundary(kH3H3, rng);
  const double shift = weighted_busemann(g, ProductPoint::basepoint(kH3H3), theta, q);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_point(kH3H3, rng, 3.0);
    EXPECT_NEAR(weighted_busemann(g, x, theta, q) - weighted_busemann(g, x, theta), shift, 1e-10);
  }
}

}  // namespace
}  // namespace minent
