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

#include "minent/radial_average.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "minent/errors.hpp"

namespace minent {
namespace {

constexpr double kStep = 1.0 / 64.0;
constexpr double kTableEnd = 200.0;
constexpr double kSmall = 1e-8;

/// R_m(r) = int_0^r sinh^m(t) dt / sinh^m(r).
double sinh_power_ratio(int m, double r) {
  if (r == 0.0) {
    return 0.0;
  }
  if (r < 1.0) {
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    const double sr = std::sinh(r);
    return Gauss::integrate([&](double t) { return std::pow(std::sinh(t) / sr, m); }, 0.0, r);
  }
  const double coth = 1.0 / std::tanh(r);
  const double inv_sinh2 = 1.0 / (std::sinh(r) * std::sinh(r));
  double even = r;
  double odd = std::tanh(0.5 * r);
  if (m == 0) {
    return even;
  }
  if (m == 1) {
    return odd;
  }
  double result = 0.0;
  for (int j = 2; j <= m; ++j) {
    double& prev = (j % 2 == 0) ? even : odd;
    prev = coth / j - (static_cast<double>(j - 1) / j) * prev * inv_sinh2;
    result = prev;
  }
  return result;
}

RadialJet derivatives(int n, double r) {
  RadialJet jet;
  if (r < kSmall) {
    const double lim = static_cast<double>(n - 1) / n;
    jet.d1 = lim * r;
    jet.d1_coth = lim;
    jet.d2 = lim;
    return jet;
  }
  jet.d1 = (n - 1) * sinh_power_ratio(n - 1, r);
  jet.d1_coth = jet.d1 / std::tanh(r);
  jet.d2 = (n - 1) * (1.0 - jet.d1_coth);
  return jet;
}

struct Table {
  std::vector<double> f;
  std::vector<double> d1;
  std::vector<double> d2;
};

std::unique_ptr<Table> build_table(int n) {
  auto table = std::make_unique<Table>();
  const auto nodes = static_cast<std::size_t>(kTableEnd / kStep) + 1;
  table->f.resize(nodes);
  table->d1.resize(nodes);
  table->d2.resize(nodes);
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  double f = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double r = j * kStep;
    if (j > 0) {
      f += Gauss::integrate([&](double t) { return derivatives(n, t).d1; }, r - kStep, r);
    }
    const RadialJet jet = derivatives(n, r);
    table->f[j] = f;
    table->d1[j] = jet.d1;
    table->d2[j] = jet.d2;
  }
  return table;
}

const Table& table_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Table>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[n];
  if (!slot) {
    slot = build_table(n);
  }
  return *slot;
}

double interpolate(const Table& t, double r) {
  const auto j = static_cast<std::size_t>(r / kStep);
  if (j + 1 >= t.f.size()) {
    return t.f.back();
  }
  const double h = kStep;
  const double s = r / kStep - static_cast<double>(j);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  const double s5 = s4 * s;
  const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  return t.f[j] * h0 + h * t.d1[j] * h1 + h * h * t.d2[j] * h2 + h * h * t.d2[j + 1] * h3 +
         h * t.d1[j + 1] * h4 + t.f[j + 1] * h5;
}

void check_args(int n, double r) {
  if (n < 2) {
    throw ConfigError("radial profile needs n >= 2, got " + std::to_string(n));
  }
  if (!(r >= 0.0)) {
    throw DomainError("radial profile needs r >= 0");
  }
}

}  // namespace

double busemann_mean_value(int n, double r) {
  check_args(n, r);
  const Table& t = table_for(n);
  if (r >= kTableEnd) {
    // F' = 1 up to e^{-2r} terms beyond the table.
    return t.f.back() + (r - kTableEnd);
  }
  return interpolate(t, r);
}

RadialJet busemann_mean(int n, double r) {
  check_args(n, r);
  RadialJet jet = derivatives(n, r);
  jet.value = busemann_mean_value(n, r);
  return jet;
}

}  // namespace minent
