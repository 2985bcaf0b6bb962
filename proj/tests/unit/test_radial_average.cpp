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

#include "minent/radial_average.hpp"
#include "oracles.hpp"

namespace minent {
namespace {

TEST(RadialAverageTest, ThreeDimensionalClosedForm) {
  for (double r : {1e-6, 0.01, 0.3, 0.99, 1.0, 2.5, 10.0, 50.0, 199.9, 250.0}) {
    const double expected = r < 1e-3 ? r * r / 3.0 : r / std::tanh(r) - 1.0;
    EXPECT_NEAR(busemann_mean_value(3, r), expected, 1e-11 * std::max(1.0, r)) << "r = " << r;
  }
}

TEST(RadialAverageTest, MatchesSphereQuadrature) {
  for (int n : {3, 4, 5, 8}) {
    for (double r : {0.05, 0.5, 1.5, 4.0, 12.0}) {
      EXPECT_NEAR(busemann_mean_value(n, r), oracle::sphere_mean_busemann(n, r), 1e-9)
          << "n = " << n << ", r = " << r;
    }
  }
}

TEST(RadialAverageTest, DerivativesAreConsistent) {
  for (int n : {3, 4, 6, 9}) {
    for (double r : {0.2, 0.9, 1.1, 3.0, 20.0}) {
      const RadialJet jet = busemann_mean(n, r);
      const double h = 1e-5;
      const double d1 = (busemann_mean_value(n, r + h) - busemann_mean_value(n, r - h)) / (2 * h);
      const double d2 = (busemann_mean(n, r + h).d1 - busemann_mean(n, r - h).d1) / (2 * h);
      EXPECT_NEAR(jet.d1, d1, 1e-8);
      EXPECT_NEAR(jet.d2, d2, 1e-7);
      EXPECT_NEAR(jet.d2 + (n - 1) * jet.d1 / std::tanh(r), n - 1, 1e-10);
    }
  }
}

TEST(RadialAverageTest, SmallRadiusLimit) {
  for (int n : {3, 5}) {
    const RadialJet jet = busemann_mean(n, 0.0);
    EXPECT_EQ(jet.value, 0.0);
    EXPECT_NEAR(jet.d2, (n - 1.0) / n, 1e-15);
    EXPECT_NEAR(jet.d1_coth, (n - 1.0) / n, 1e-15);
    EXPECT_NEAR(busemann_mean(n, 1e-4).d1_coth, (n - 1.0) / n, 1e-7);
  }
}

}  // namespace
}  // namespace minent
