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

#include <benchmark/benchmark.h>

#include "minent/barycenter.hpp"
#include "minent/entropy.hpp"
#include "minent/matrix_inequalities.hpp"
#include "minent/measures.hpp"

namespace minent {
namespace {

const std::vector<FactorSpec> kH3H3{{3, 1}, {3, 1}};

void BM_AtomicObjective(benchmark::State& state) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto sigma = sample_ps(sample_ball_point(g, 1.0, 1, 0), static_cast<std::size_t>(state.range(0)), 2);
  const AtomicObjective f(g, sigma);
  const auto x = sample_ball_point(g, 1.0, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.evaluate(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sigma.size()));
}
BENCHMARK(BM_AtomicObjective)->Arg(1 << 10)->Arg(1 << 14);

void BM_ConvolvedObjective(benchmark::State& state) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto gmin = minimal_entropy_metric(kH3H3);
  const auto mu = sample_mu(g, ProductPoint::basepoint(kH3H3), 1.1 * g.entropy(),
                            static_cast<std::size_t>(state.range(0)), 3);
  const ConvolvedObjective f(gmin, mu);
  const auto x = sample_ball_point(gmin, 1.0, 1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.evaluate(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mu.size()));
}
BENCHMARK(BM_ConvolvedObjective)->Arg(1 << 10)->Arg(10000);

void BM_SampleMu(benchmark::State& state) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto y = sample_ball_point(g, 2.0, 1, 3);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_mu(g, y, 1.1 * g.entropy(), static_cast<std::size_t>(state.range(0)), ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleMu)->Arg(10000);

void BM_NaturalMap(benchmark::State& state) {
  const ScaledProductMetric g(kH3H3, {1.3, 1.0 / 1.3});
  const auto y = sample_ball_point(g, 2.0, 1, 4);
  NaturalMapConfig cfg;
  cfg.n_z = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(natural_map(g, y, 1.1 * g.entropy(), cfg));
  }
}
BENCHMARK(BM_NaturalMap)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DeterminantFunctional(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const auto s = build_complex_structures(n, d);
  const Mat H = sample_trace_one_psd(n, 5, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(try_determinant_functional(H, s));
  }
}
BENCHMARK(BM_DeterminantFunctional)->Args({3, 1})->Args({8, 4});

void BM_BusemannJet(benchmark::State& state) {
  const auto g = minimal_entropy_metric(kH3H3);
  const auto x = sample_ball_point(g, 2.0, 1, 5);
  const auto theta = sample_ps(ProductPoint::basepoint(kH3H3), 4, 6).atom(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_busemann_jet(g, x, theta));
  }
}
BENCHMARK(BM_BusemannJet);

}  // namespace
}  // namespace minent

BENCHMARK_MAIN();
