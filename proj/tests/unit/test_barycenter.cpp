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

#include "localization_scenario.hpp"
#include "minent/barycenter.hpp"
#include "minent/entropy.hpp"
#include "minent/errors.hpp"
#include "oracles.hpp"

namespace minent {
namespace {

const std::vector<FactorSpec> kH3H3{{3, 1}, {3, 1}};
constexpr double kTol = 1e-8;

AtomicBoundaryMeasure random_atoms(const std::vector<FactorSpec>& factors, CounterRng& rng, int count) {
  std::vector<FurstenbergPoint> atoms;
  Vec w(count);
  for (int j = 0; j < count; ++j) {
    atoms.push_back(oracle::random_boundary(factors, rng));
    w(j) = 0.1 + rng.uniform();
  }
  return AtomicBoundaryMeasure::from_atoms(atoms, w);
}

ScaledProductMetric skewed() { return ScaledProductMetric(kH3H3, {1.3, 1.0 / 1.3}); }

TEST(ObjectiveTest, DiracIsWeightedBusemann) {
  CounterRng rng(50, streams::kTestScenario, 0);
  const auto g = minimal_entropy_metric(kH3H3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracle::random_point(kH3H3, rng, 2.0);
    const auto theta = oracle::random_boundary(kH3H3, rng);
    EXPECT_EQ(objective(g, x, AtomicBoundaryMeasure::dirac(theta)).value, weighted_busemann(g, x, theta));
  }
}

TEST(ObjectiveTest, DerivativesMatchFiniteDifferences) {
  CounterRng rng(51, streams::kTestScenario, 0);
  const std::vector<FactorSpec> factors{{3, 1}, {4, 1}};
  const auto g = minimal_entropy_metric(factors);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = oracle::random_point(factors, rng, 2.0);
    const AtomicObjective f(g, random_atoms(factors, rng, 16));
    const auto eval = f.evaluate(x);
    const auto along = [&](const Vec& zeta) { return f.value(exp_orthonormal(g, x, zeta)); };
    EXPECT_LT((eval.gradient - oracle::fd_gradient(along, 7, 1e-5)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((eval.hessian - oracle::fd_hessian(along, 7, 1e-4)).cwiseAbs().maxCoeff(), 1e-5);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(eval.hessian).eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(ObjectiveTest, ConvolvedDerivativesMatchFiniteDifferences) {
  CounterRng rng(52, streams::kTestScenario, 0);
  const auto g = minimal_entropy_metric(kH3H3);
  const auto mu = sample_mu(skewed(), oracle::random_point(kH3H3, rng, 1.0), 4.0, 256, 3);
  const ConvolvedObjective f(g, mu);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_point(kH3H3, rng, 2.0);
    const auto eval = f.evaluate(x);
    const auto along = [&](const Vec& zeta) { return f.value(exp_orthonormal(g, x, zeta)); };
    EXPECT_LT((eval.gradient - oracle::fd_gradient(along, 6, 1e-5)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((eval.hessian - oracle::fd_hessian(along, 6, 1e-4)).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(ObjectiveTest, BasepointShiftIsAnAdditiveConstant) {
  CounterRng rng(53, streams::kTestScenario, 0);
  const auto g = minimal_entropy_metric(kH3H3);
  const auto sigma = random_atoms(kH3H3, rng, 32);
  const auto q = oracle::random_point(kH3H3, rng, 2.0);
  const AtomicObjective f(g, sigma);
  const AtomicObjective fq(g, sigma, q);
  const auto a = oracle::random_point(kH3H3, rng, 2.0);
  const auto b = oracle::random_point(kH3H3, rng, 2.0);
  EXPECT_NEAR(f.value(a) - fq.value(a), f.value(b) - fq.value(b), 1e-12);
  EXPECT_LT((f.evaluate(a).gradient - fq.evaluate(a).gradient).norm(), 1e-12);
}

TEST(BarycenterTest, SymmetricMeasuresFixTheBasepoint) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto p = ProductPoint::basepoint(kH3H3);
  CounterRng rng(54, streams::kTestScenario, 0);
  const auto init = oracle::random_point(kH3H3, rng, 1.5);
  const auto r = barycenter(g, sample_ps(p, 4096, 1), init);
  EXPECT_LT(r.grad_norm, kTol);
  EXPECT_GT(r.hess_min_eig, 0.0);
  EXPECT_LT(product_distance(g, r.point, p), kTol);

  std::vector<FurstenbergPoint> cross;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (double sa : {-1.0, 1.0}) {
        for (double sb : {-1.0, 1.0}) {
          Vec t0 = Vec::Zero(3);
          Vec t1 = Vec::Zero(3);
          t0(a) = sa;
          t1(b) = sb;
          cross.emplace_back(std::vector<Vec>{t0, t1});
        }
      }
    }
  }
  const auto rc = barycenter(g, AtomicBoundaryMeasure::from_atoms(cross, Vec::Ones(36)), init);
  EXPECT_LT(product_distance(g, rc.point, p), kTol);
}

TEST(BarycenterTest, AntipodalDiracsAreDegenerate) {
  const auto g = minimal_entropy_metric(kH3H3);
  Vec e = Vec::Zero(3);
  e(0) = 1.0;
  const FurstenbergPoint plus({e, e});
  const FurstenbergPoint minus({Vec(-e), Vec(-e)});
  const auto sigma = AtomicBoundaryMeasure::from_atoms({plus, minus}, Vec::Ones(2));
  EXPECT_THROW(barycenter(g, sigma, ProductPoint::basepoint(kH3H3)), DegenerateMeasure);
}

TEST(BarycenterTest, IndependentOfInitialization) {
  CounterRng rng(55, streams::kTestScenario, 0);
  const auto g = minimal_entropy_metric(kH3H3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sigma = sample_ps(oracle::random_point(kH3H3, rng, 1.5), 2048, 10 + trial);
    const auto a = oracle::random_point(kH3H3, rng, 1.0);
    Vec dir(6);
    for (int j = 0; j < 6; ++j) {
      dir(j) = rng.normal();
    }
    const auto b = exp_orthonormal(g, a, 2.0 * dir.normalized());
    const auto ra = barycenter(g, sigma, a);
    const auto rb = barycenter(g, sigma, b);
    EXPECT_LT(product_distance(g, ra.point, rb.point), 10.0 * kTol);
  }
}

TEST(BarycenterTest, IterationCapRaisesNonconvergence) {
  CounterRng rng(56, streams::kTestScenario, 0);
  const auto g = minimal_entropy_metric(kH3H3);
  const auto sigma = sample_ps(oracle::random_point(kH3H3, rng, 1.5), 512, 1);
  BarycenterOptions opts;
  opts.max_iterations = 1;
  EXPECT_THROW(barycenter(g, sigma, oracle::random_point(kH3H3, rng, 3.0), opts), Nonconvergence);
  opts.tol = 0.0;
  EXPECT_THROW(barycenter(g, sigma, ProductPoint::basepoint(kH3H3), opts), ConfigError);
}

TEST(NaturalMapTest, FixesBasepointAtMinimalMetric) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto p = ProductPoint::basepoint(kH3H3);
  NaturalMapConfig cfg;
  cfg.n_z = 4000;
  EXPECT_LT(product_distance(g, natural_map(g, p, 1.1 * g.entropy(), cfg).barycenter.point, p), kTol);
  cfg.inner = InnerAverage::Atomic;
  cfg.n_z = 500;
  cfg.n_theta = 64;
  EXPECT_LT(product_distance(g, natural_map(g, p, 1.1 * g.entropy(), cfg).barycenter.point, p), 0.02);
}

TEST(NaturalMapTest, ExactAndAtomicInnerAveragesAgree) {
  CounterRng rng(57, streams::kTestScenario, 0);
  const auto y = oracle::random_point(kH3H3, rng, 1.5);
  NaturalMapConfig cfg;
  cfg.n_z = 2000;
  const auto exact = natural_map(skewed(), y, 4.0, cfg).barycenter.point;
  cfg.inner = InnerAverage::Atomic;
  cfg.n_theta = 256;
  const auto atomic = natural_map(skewed(), y, 4.0, cfg).barycenter.point;
  EXPECT_LT(product_distance(minimal_entropy_metric(kH3H3), exact, atomic), 0.05);
}

TEST(NaturalMapTest, BasepointInvariantAndEquivariant) {
  CounterRng rng(58, streams::kTestScenario, 0);
  const auto gmin = minimal_entropy_metric(kH3H3);
  const auto y = oracle::random_point(kH3H3, rng, 1.5);
  NaturalMapConfig cfg;
  cfg.n_z = 2000;
  const auto base = natural_map(skewed(), y, 4.0, cfg).barycenter.point;

  NaturalMapConfig shifted = cfg;
  shifted.basepoint = oracle::random_point(kH3H3, rng, 2.0);
  EXPECT_LT(product_distance(gmin, base, natural_map(skewed(), y, 4.0, shifted).barycenter.point), 10.0 * kTol);

  const std::vector<Mat> rot{random_rotation(3, 9, 0), random_rotation(3, 9, 1)};
  const auto R = ProductIsometry::rotation(rot);
  NaturalMapConfig rotated = cfg;
  rotated.frame = rot;
  const auto image = natural_map(skewed(), R.apply(y), 4.0, rotated).barycenter.point;
  EXPECT_LT(product_distance(gmin, image, R.apply(base)), 10.0 * kTol);
}

TEST(NaturalMapTest, ApproachesIdentityAtLargeExponent) {
  CounterRng rng(59, streams::kTestScenario, 0);
  const auto gmin = minimal_entropy_metric(kH3H3);
  NaturalMapConfig cfg;
  cfg.n_z = 4000;
  for (int trial = 0; trial < 5; ++trial) {
    const auto y = oracle::random_point(kH3H3, rng, 2.0);
    double prev = 1e300;
    for (double s : {5.0, 10.0, 20.0, 50.0}) {
      const double d = product_distance(gmin, natural_map(skewed(), y, s, cfg).barycenter.point, y);
      EXPECT_LT(d, prev + 0.02);
      prev = d;
    }
    EXPECT_LT(prev, 0.2);
  }
}

TEST(JacobianTest, RespectsBoundAndIsStepRobust) {
  CounterRng rng(60, streams::kTestScenario, 0);
  NaturalMapConfig cfg;
  cfg.n_z = 2000;
  const auto g = skewed();
  const auto y = oracle::random_point(kH3H3, rng, 2.0);
  const double s = 1.1 * g.entropy();
  const auto coarse = jacobian_fd(g, y, s, 1e-3, cfg);
  const auto fine = jacobian_fd(g, y, s, 5e-4, cfg);
  EXPECT_FALSE(coarse.violation);
  EXPECT_GT(coarse.bound, 0.0);
  EXPECT_NEAR(coarse.bound, std::pow(s / optimal_scales(kH3H3).h_min, 6), 1e-9 * coarse.bound);
  EXPECT_NEAR(fine.jac_det / coarse.jac_det, 1.0, 0.05);
  EXPECT_EQ(coarse.differential.rows(), 6);
}

TEST(JacobianTest, MinimalMetricAtBasepoint) {
  const auto g = minimal_entropy_metric(kH3H3);
  NaturalMapConfig cfg;
  cfg.n_z = 2000;
  const auto r = jacobian_fd(g, ProductPoint::basepoint(kH3H3), 1.1 * g.entropy(), 1e-3, cfg);
  EXPECT_LE(std::abs(r.jac_det), r.bound * 1.1);
  EXPECT_NEAR(r.jac_det, 1.0, 1e-4);
  EXPECT_LT(r.homothety_deviation, 1e-3);
}

TEST(JacobianTest, SolverFailureCarriesStencilIndex) {
  NaturalMapConfig cfg;
  cfg.n_z = 200;
  cfg.n_theta = 16;
  cfg.inner = InnerAverage::Atomic;
  cfg.solver.max_iterations = 0;
  CounterRng rng(63, streams::kTestScenario, 0);
  try {
    jacobian_fd(skewed(), oracle::random_point(kH3H3, rng, 1.0), 4.0, 1e-3, cfg);
    FAIL() << "expected StencilFailure";
  } catch (const StencilFailure& e) {
    EXPECT_EQ(e.stencil_index(), 12);
  }
  EXPECT_THROW(jacobian_fd(skewed(), ProductPoint::basepoint(kH3H3), 2.0, 1e-3, cfg), ParameterError);
}

TEST(LocalizationTest, PredicateArithmetic) {
  EXPECT_TRUE(localization_check(0.9, {1.0, 1.0}));
  EXPECT_FALSE(localization_check(0.6, {0.2}));
  EXPECT_TRUE(localization_check(0.6, {1.0 / 0.6 - 1.0}));
  EXPECT_FALSE(localization_check(0.9, {}));
  EXPECT_THROW(localization_check(0.5, {1.0}), ConfigError);
  EXPECT_THROW(localization_check(1.0, {1.0}), ConfigError);
}

TEST(LocalizationTest, DiracsTowardDirectionExcludeThePoint) {
  const auto g = minimal_entropy_metric(kH3H3);
  CounterRng rng(61, streams::kTestScenario, 0);
  const auto x = oracle::random_point(kH3H3, rng, 1.0);
  Vec v(6);
  for (int j = 0; j < 6; ++j) {
    v(j) = rng.normal();
  }
  v.normalize();
  // Boundary point reached from x along v.
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < 2; ++i) {
    const Vec vi = v.segment(g.offset(i), 3).normalized();
    Vec far = hyperbolic::exp(x.factor(i), hyperbolic::from_frame(x.factor(i), 40.0 * vi));
    dirs.push_back(far.tail(3).normalized());
  }
  const auto nu_z = AtomicBoundaryMeasure::dirac(FurstenbergPoint(dirs, 1e-9));
  const double a = alignment(g, x, v, nu_z);
  ASSERT_TRUE(localization_check(0.9, {a}));
  const auto sigma = AtomicBoundaryMeasure::mixture(sample_ps(ProductPoint::basepoint(kH3H3), 1024, 1), nu_z, 0.9);
  const auto eval = objective(g, x, sigma);
  EXPECT_LT(eval.gradient.dot(v), 0.0);
  EXPECT_GT(eval.gradient.norm(), 10.0 * kTol);
}

TEST(LocalizationTest, RandomizedTruePremiseScenarios) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const auto sc = oracle::localization_scenario(kH3H3, 62, trial, 512);
    ASSERT_TRUE(localization_check(sc.c, sc.alignments)) << "trial " << trial;
    const auto r = barycenter(sc.metric, sc.sigma, sc.x);
    EXPECT_GT(product_distance(sc.metric, r.point, sc.x), 10.0 * kTol) << "trial " << trial;
  }
}

}  // namespace
}  // namespace minent
