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

#include <numeric>

#include "minent/parallel.hpp"
#include "minent/rng.hpp"

namespace minent {
namespace {

TEST(PhiloxTest, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  EXPECT_EQ(CounterRng::philox(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(CounterRng::philox(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(CounterRng::philox(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRngTest, AddressableAndMoments) {
  CounterRng a(5, 1, 77);
  CounterRng b(5, 1, 77);
  CounterRng c(5, 2, 77);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(CounterRng(5, 1, 77).next_u64(), c.next_u64());
  double sum = 0.0;
  double sum2 = 0.0;
  double gsum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    CounterRng r(9, 0, static_cast<std::uint64_t>(i));
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
    gsum += r.gamma(0.3);
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.01);
  EXPECT_NEAR(gsum / n, 0.3, 0.01);
}

TEST(ParallelTest, BlockedReduceIsIndependentOfThreadCount) {
  std::vector<double> values(100003);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = CounterRng(3, 0, i).uniform() * 1e6;
  }
  auto run = [&](int threads) {
    set_thread_count(threads);
    return blocked_reduce(
        values.size(), 777, 0.0,
        [&](std::size_t a, std::size_t b) { return std::accumulate(values.begin() + a, values.begin() + b, 0.0); },
        [](double x, double y) { return x + y; });
  };
  const double one = run(1);
  EXPECT_EQ(one, run(3));
  EXPECT_EQ(one, run(8));
  set_thread_count(1);
}

}  // namespace
}  // namespace minent
