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

#ifndef MINENT_MATRIX_INEQUALITIES_HPP
#define MINENT_MATRIX_INEQUALITIES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "minent/geometry.hpp"

namespace minent {

/// d - 1 orthogonal, pairwise anticommuting J_k with J_k^2 = -I on R^n.
struct ComplexStructureSet {
  int n = 0;
  int d = 1;
  std::vector<Mat> J;
};

/// Block constructions from the complex unit (d = 2) or left multiplication by
/// i, j, k on quaternion blocks (d = 4). ConfigError unless d divides n.
ComplexStructureSet build_complex_structures(int n, int d);

/// det(H)^{1/2} / det(I - H - sum J_k H J_k) for symmetric PSD H with tr H = 1.
/// DomainError when H is not PSD or the denominator is not positive definite.
double determinant_functional(const Mat& H, const ComplexStructureSet& structures);
std::optional<double> try_determinant_functional(const Mat& H, const ComplexStructureSet& structures);

/// (sqrt(n) / (n + d - 2))^n; ConfigError for n < 3.
double determinant_bound(int n, int d);

struct DeterminantFuzzReport {
  int n = 0;
  int d = 1;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t domain_errors = 0;
  double max_ratio = 0.0;
  std::size_t argmax_trial = 0;
  Mat argmax;
  /// First violating matrix, if any.
  std::optional<Mat> counterexample;
};

/// Random trace-one PSD matrix for a trial: Wishart, Dirichlet spectra (two
/// concentrations) and low-rank Wishart, cycling with the trial index.
Mat sample_trace_one_psd(int n, std::uint64_t seed, std::uint64_t trial);

/// Fuzzes functional <= bound + slack. With `throw_on_violation`, a violation
/// raises CounterexampleFound carrying the matrix.
DeterminantFuzzReport fuzz_determinant_functional(int n, int d, std::size_t trials, std::uint64_t seed, bool throw_on_violation = true);

struct MaximizeReport {
  Mat H;
  double value = 0.0;
  double bound = 0.0;
  int iterations = 0;
  /// Frobenius distance from I/n.
  double distance_to_center = 0.0;
};

/// Projected gradient ascent of log of the functional over trace-one PD matrices.
MaximizeReport maximize_determinant_functional(int n, int d, std::uint64_t seed, int max_iterations = 20000,
                                       double gradient_tol = 1e-11);

struct BlockDetResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// det M <= prod_g det M_gg for symmetric PSD M, groups given as one label per
/// index. The comparison allows relative slack 1e-12 plus 1e-12 * prod M_jj.
BlockDetResult block_det_check(const Mat& M, const std::vector<int>& groups, bool throw_on_violation = true);

struct BlockDetFuzzReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
};

/// Random PSD matrices (sizes 2..8, some rank deficient) with random partitions.
BlockDetFuzzReport fuzz_block_det(std::size_t trials, std::uint64_t seed, bool throw_on_violation = true);

}  // namespace minent

#endif  // MINENT_MATRIX_INEQUALITIES_HPP
