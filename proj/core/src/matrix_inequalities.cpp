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

#include "minent/matrix_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "minent/errors.hpp"
#include "minent/parallel.hpp"
#include "minent/rng.hpp"

namespace minent {
namespace {

constexpr std::size_t kChunk = 1024;

std::string print_matrix(const Mat& m) {
  std::ostringstream os;
  os.precision(17);
  os << m.format(Eigen::IOFormat(Eigen::FullPrecision, 0, ", ", "\n", "[", "]", "[", "]"));
  return os.str();
}

Mat gaussian(int rows, int cols, CounterRng& rng) {
  Mat g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      g(r, c) = rng.normal();
    }
  }
  return g;
}

Mat orthogonal(int n, CounterRng& rng) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n, rng));
  Mat q = qr.householderQ();
  for (int c = 0; c < n; ++c) {
    if (qr.matrixQR()(c, c) < 0.0) {
      q.col(c) *= -1.0;
    }
  }
  return q;
}

Mat dirichlet_spectrum(int n, double concentration, CounterRng& rng) {
  Vec lambda(n);
  for (int j = 0; j < n; ++j) {
    lambda(j) = rng.gamma(concentration);
  }
  lambda /= lambda.sum();
  const Mat q = orthogonal(n, rng);
  return q * lambda.asDiagonal() * q.transpose();
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

Mat denominator(const Mat& H, const ComplexStructureSet& s) {
  Mat D = Mat::Identity(H.rows(), H.cols()) - H;
  for (const auto& j : s.J) {
    D -= j * H * j;
  }
  return sym(D);
}

}  // namespace

ComplexStructureSet build_complex_structures(int n, int d) {
  if (n < 1) {
    throw ConfigError("matrix dimension must be positive");
  }
  if (d != 1 && d != 2 && d != 4) {
    throw ConfigError("d must be 1, 2 or 4");
  }
  if (n % d != 0) {
    throw ConfigError("d = " + std::to_string(d) + " requires n divisible by d, got n = " + std::to_string(n));
  }
  ComplexStructureSet s{n, d, {}};
  if (d == 2) {
    Mat j = Mat::Zero(n, n);
    for (int b = 0; b < n; b += 2) {
      j(b, b + 1) = -1.0;
      j(b + 1, b) = 1.0;
    }
    s.J.push_back(std::move(j));
  } else if (d == 4) {
    Eigen::Matrix4d li;
    Eigen::Matrix4d lj;
    Eigen::Matrix4d lk;
    li << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
    lj << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
    lk << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
    for (const Eigen::Matrix4d& block : {li, lj, lk}) {
      Mat j = Mat::Zero(n, n);
      for (int b = 0; b < n; b += 4) {
        j.block(b, b, 4, 4) = block;
      }
      s.J.push_back(std::move(j));
    }
  }
  return s;
}

std::optional<double> try_determinant_functional(const Mat& H, const ComplexStructureSet& structures) {
  try {
    return determinant_functional(H, structures);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double determinant_functional(const Mat& H, const ComplexStructureSet& structures) {
  if (H.rows() != structures.n || H.cols() != structures.n) {
    throw ShapeError("H does not match the complex structure dimension");
  }
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("H must be symmetric");
  }
  if (std::abs(H.trace() - 1.0) > 1e-10) {
    throw DomainError("H must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eh(sym(H), Eigen::EigenvaluesOnly);
  if (eh.eigenvalues().minCoeff() < -1e-10) {
    throw DomainError("H must be positive semidefinite");
  }
  Eigen::SelfAdjointEigenSolver<Mat> ed(denominator(H, structures), Eigen::EigenvaluesOnly);
  if (!(ed.eigenvalues().minCoeff() > 1e-13)) {
    throw DomainError("denominator I - H - sum J H J is not positive definite");
  }
  double det_h = 1.0;
  for (Eigen::Index j = 0; j < eh.eigenvalues().size(); ++j) {
    det_h *= std::max(0.0, eh.eigenvalues()(j));
  }
  return std::sqrt(det_h) / ed.eigenvalues().prod();
}

double determinant_bound(int n, int d) {
  if (n < 3) {
    throw ConfigError("the determinant bound needs n >= 3, got n = " + std::to_string(n));
  }
  return std::pow(std::sqrt(static_cast<double>(n)) / (n + d - 2), n);
}

Mat sample_trace_one_psd(int n, std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, streams::kDeterminantFuzz, trial);
  Mat H;
  switch (trial % 4) {
    case 0: {
      const Mat g = gaussian(n, n, rng);
      H = g * g.transpose();
      break;
    }
    case 1:
      H = dirichlet_spectrum(n, 1.0, rng);
      break;
    case 2:
      H = dirichlet_spectrum(n, 0.05, rng);
      break;
    default: {
      const int rank = 1 + static_cast<int>((trial / 4) % static_cast<std::uint64_t>(std::max(1, n - 1)));
      const Mat g = gaussian(n, rank, rng);
      H = g * g.transpose();
      break;
    }
  }
  H = sym(H);
  return H / H.trace();
}

DeterminantFuzzReport fuzz_determinant_functional(int n, int d, std::size_t trials, std::uint64_t seed, bool throw_on_violation) {
  const ComplexStructureSet s = build_complex_structures(n, d);
  const double bound = determinant_bound(n, d);
  if (trials < 1) {
    throw ConfigError("at least one trial is required");
  }
  const double slack = default_tolerances().functional_slack;

  DeterminantFuzzReport init;
  init.n = n;
  init.d = d;
  init.max_ratio = -1.0;
  DeterminantFuzzReport report = blocked_reduce(
      trials, kChunk, init,
      [&](std::size_t t0, std::size_t t1) {
        DeterminantFuzzReport p = init;
        for (std::size_t t = t0; t < t1; ++t) {
          const Mat H = sample_trace_one_psd(n, seed, t);
          const auto value = try_determinant_functional(H, s);
          ++p.trials;
          if (!value) {
            ++p.domain_errors;
            continue;
          }
          const double ratio = *value / bound;
          if (ratio > p.max_ratio) {
            p.max_ratio = ratio;
            p.argmax_trial = t;
            p.argmax = H;
          }
          if (*value > bound + slack) {
            ++p.violations;
            if (!p.counterexample) {
              p.counterexample = H;
            }
          }
        }
        return p;
      },
      [](DeterminantFuzzReport a, const DeterminantFuzzReport& b) {
        a.trials += b.trials;
        a.domain_errors += b.domain_errors;
        a.violations += b.violations;
        if (b.max_ratio > a.max_ratio) {
          a.max_ratio = b.max_ratio;
          a.argmax_trial = b.argmax_trial;
          a.argmax = b.argmax;
        }
        if (!a.counterexample && b.counterexample) {
          a.counterexample = b.counterexample;
        }
        return a;
      });
  if (report.violations > 0 && throw_on_violation) {
    throw CounterexampleFound("determinant functional exceeds its bound in " + std::to_string(report.violations) +
                                  " trials",
                              print_matrix(*report.counterexample));
  }
  return report;
}

MaximizeReport maximize_determinant_functional(int n, int d, std::uint64_t seed, int max_iterations, double gradient_tol) {
  const ComplexStructureSet s = build_complex_structures(n, d);
  const Mat I = Mat::Identity(n, n);
  auto log_value = [&](const Mat& H) -> std::optional<double> {
    Eigen::LLT<Mat> lh(H);
    Eigen::LLT<Mat> ld(denominator(H, s));
    if (lh.info() != Eigen::Success || ld.info() != Eigen::Success) {
      return std::nullopt;
    }
    const double log_det_h = 2.0 * lh.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double log_det_d = 2.0 * ld.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return 0.5 * log_det_h - log_det_d;
  };

  CounterRng rng(seed, streams::kMaximizer, 0);
  const Mat g = gaussian(n, n, rng);
  Mat H = sym(g * g.transpose());
  H = 0.5 * H / H.trace() + 0.5 * I / n;

  MaximizeReport out;
  double current = *log_value(H);
  double t = 1e-2;
  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter;
    const Mat d_inv = denominator(H, s).inverse();
    Mat grad = 0.5 * H.inverse() + d_inv;
    for (const auto& j : s.J) {
      grad += j * d_inv * j;
    }
    grad = sym(grad);
    grad -= (grad.trace() / n) * I;
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) < gradient_tol) {
      break;
    }
    t *= 2.0;
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving, t *= 0.5) {
      const Mat trial = H + t * grad;
      const auto v = log_value(trial);
      if (v && *v >= current + 1e-4 * t * gnorm2) {
        H = trial;
        current = *v;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      break;
    }
  }
  out.H = H;
  out.value = determinant_functional(sym(H) / H.trace(), s);
  out.bound = determinant_bound(n, d);
  out.distance_to_center = (H - I / n).norm();
  return out;
}

BlockDetResult block_det_check(const Mat& M, const std::vector<int>& groups, bool throw_on_violation) {
  if (M.rows() != M.cols() || static_cast<Eigen::Index>(groups.size()) != M.rows()) {
    throw ShapeError("block check needs a square matrix and one group label per index");
  }
  BlockDetResult r;
  r.lhs = M.determinant();
  std::vector<int> labels = groups;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  r.rhs = 1.0;
  for (int label : labels) {
    std::vector<Eigen::Index> idx;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (groups[j] == label) {
        idx.push_back(static_cast<Eigen::Index>(j));
      }
    }
    Mat block(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = M(idx[a], idx[b]);
      }
    }
    r.rhs *= block.determinant();
  }
  const double hadamard = M.diagonal().cwiseMax(0.0).prod();
  const auto& tol = default_tolerances();
  r.holds = r.lhs <= r.rhs * (1.0 + tol.block_det_slack) + tol.functional_slack * hadamard;
  if (!r.holds && throw_on_violation) {
    throw CounterexampleFound("block determinant estimate violated", print_matrix(M));
  }
  return r;
}

BlockDetFuzzReport fuzz_block_det(std::size_t trials, std::uint64_t seed, bool throw_on_violation) {
  BlockDetFuzzReport report = blocked_reduce(
      trials, kChunk, BlockDetFuzzReport{},
      [&](std::size_t t0, std::size_t t1) {
        BlockDetFuzzReport p;
        for (std::size_t t = t0; t < t1; ++t) {
          CounterRng rng(seed, streams::kBlockDet, t);
          const int n = 2 + static_cast<int>(rng.next_u32() % 7);
          const int rank = 1 + static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(n + 2));
          const Mat g = gaussian(n, rank, rng);
          const Mat M = sym(g * g.transpose());
          const int n_groups = 2 + static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(std::min(3, n - 1)));
          std::vector<int> groups(static_cast<std::size_t>(n));
          for (int j = 0; j < n; ++j) {
            groups[static_cast<std::size_t>(j)] = j < n_groups ? j : static_cast<int>(rng.next_u32() % n_groups);
          }
          const BlockDetResult r = block_det_check(M, groups, false);
          ++p.trials;
          if (!r.holds) {
            ++p.violations;
          }
          if (r.rhs > 1e-8 * M.diagonal().prod()) {
            p.max_ratio = std::max(p.max_ratio, r.lhs / r.rhs);
          }
        }
        return p;
      },
      [](BlockDetFuzzReport a, const BlockDetFuzzReport& b) {
        a.trials += b.trials;
        a.violations += b.violations;
        a.max_ratio = std::max(a.max_ratio, b.max_ratio);
        return a;
      });
  if (report.violations > 0 && throw_on_violation) {
    throw CounterexampleFound("block determinant estimate violated in " + std::to_string(report.violations) +
                                  " trials",
                              "");
  }
  return report;
}

}  // namespace minent
