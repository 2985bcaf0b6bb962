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

#ifndef MINENT_RADIAL_AVERAGE_HPP
#define MINENT_RADIAL_AVERAGE_HPP

namespace minent {

/// F_n(r) = mean of B(x, theta) over the visual measure of a point z at
/// distance r from x, in H^n. It solves F'' + (n - 1) coth(r) F' = n - 1 with
/// F(0) = F'(0) = 0, so F_3(r) = r coth r - 1.
struct RadialJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  /// F'(r) coth(r), finite at r = 0.
  double d1_coth = 0.0;
};

RadialJet busemann_mean(int n, double r);
double busemann_mean_value(int n, double r);

}  // namespace minent

#endif  // MINENT_RADIAL_AVERAGE_HPP
