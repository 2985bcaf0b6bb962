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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minent/barycenter.hpp"
#include "minent/entropy.hpp"
#include "minent/errors.hpp"
#include "minent/matrix_inequalities.hpp"
#include "minent/measures.hpp"

namespace minent::cli {
namespace {

std::uint64_t seed_of(const json& cfg) { return cfg["seed"].get<std::uint64_t>(); }

std::vector<FactorSpec> factors_of(const json& cfg) { return factors_from_json(cfg["factors"]); }

ScaledProductMetric metric_of(const json& cfg) {
  const auto factors = factors_of(cfg);
  const json& beta = cfg["beta"];
  if (beta == "optimal") {
    return minimal_entropy_metric(factors);
  }
  if (beta == "unscaled") {
    return ScaledProductMetric::unscaled(factors);
  }
  return ScaledProductMetric(factors, beta.get<std::vector<double>>());
}

std::vector<double> numbers(const json& v) {
  if (v.is_number()) {
    return {v.get<double>()};
  }
  return v.get<std::vector<double>>();
}

std::vector<double> exponents(const json& cfg, const ScaledProductMetric& g) {
  std::vector<double> out;
  if (!cfg["s"].is_null()) {
    out = numbers(cfg["s"]);
  } else {
    if (cfg["s_multiplier"].is_null()) {
      throw ConfigError("one of s or s_multiplier is required");
    }
    for (double m : numbers(cfg["s_multiplier"])) {
      out.push_back(m * g.entropy());
    }
  }
  for (double s : out) {
    if (!(s > g.entropy())) {
      throw ParameterError("s must exceed h(g_beta) = " + std::to_string(g.entropy()) + ", got " + std::to_string(s));
    }
  }
  return out;
}

std::vector<ProductPoint> scan_points(const json& cfg, const ScaledProductMetric& g) {
  if (!cfg["y"].is_null()) {
    return {point_from_json(cfg["y"])};
  }
  const auto count = cfg["points"].get<std::size_t>();
  std::vector<ProductPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_ball_point(g, cfg["radius"].get<double>(), seed_of(cfg), i));
  }
  return out;
}

double basepoint_distance(const ScaledProductMetric& g, const ProductPoint& y) {
  return product_distance(g, ProductPoint::basepoint(g.factors()), y);
}

InnerAverage inner_of(const json& cfg) {
  const auto name = cfg["inner"].get<std::string>();
  if (name == "exact") {
    return InnerAverage::Exact;
  }
  if (name == "atomic") {
    return InnerAverage::Atomic;
  }
  throw ConfigError("inner must be \"exact\" or \"atomic\", got \"" + name + "\"");
}

NaturalMapConfig map_config(const json& cfg) {
  NaturalMapConfig m;
  m.n_z = cfg["n_z"].get<std::size_t>();
  m.n_theta = cfg["n_theta"].get<std::size_t>();
  m.seed = seed_of(cfg);
  m.inner = inner_of(cfg);
  m.solver.tol = cfg["tol"].get<double>();
  return m;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(to.begin(), to.end(), w) == to.end()) {
      to.push_back(w);
    }
  }
}

Outcome optimal_metric(const json& cfg) {
  const auto factors = factors_of(cfg);
  const auto opt = optimal_scales(factors);
  const auto num = numeric_optimal_scales(factors);
  const auto gmin = minimal_entropy_metric(factors);
  const double n = gmin.dimension();
  double rel = std::abs(num.h - opt.h_min) / opt.h_min;
  double constraint = 0.0;
  double squares = 0.0;
  double product = std::sqrt(n);
  Outcome o;
  o.table.header = {"factor", "n", "d", "h", "alpha", "numeric_alpha", "centroid_weight"};
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double h = factors[i].h();
    rel = std::max(rel, std::abs(num.beta[i] - opt.alpha[i]) / opt.alpha[i]);
    constraint += factors[i].n * std::log(opt.alpha[i]);
    squares += (h / opt.alpha[i]) * (h / opt.alpha[i]);
    product *= std::pow(h / std::sqrt(static_cast<double>(factors[i].n)), factors[i].n / n);
    o.table.rows.push_back({i, factors[i].n, factors[i].d, h, opt.alpha[i], num.beta[i], gmin.centroid_weights()[i]});
  }
  o.results = {
      {"alpha", opt.alpha},
      {"h_min", opt.h_min},
      {"h_unscaled", product_entropy(ScaledProductMetric::unscaled(factors))},
      {"numeric_alpha", num.beta},
      {"numeric_h_min", num.h},
      {"kkt_residual", num.kkt_residual},
      {"max_relative_difference", rel},
      {"log_volume_constraint", constraint},
      {"sum_of_squares_identity", std::abs(opt.h_min * opt.h_min - squares)},
      {"product_identity", std::abs(opt.h_min - product)},
  };
  if (rel > cfg["tolerance"].get<double>()) {
    o.violation = true;
    o.warnings.push_back("closed form and numeric optimum differ by " + std::to_string(rel));
  }
  return o;
}

Outcome entropy(const json& cfg) {
  const auto g = metric_of(cfg);
  const ProductPoint y = cfg["y"].is_null() ? ProductPoint::basepoint(g.factors()) : point_from_json(cfg["y"]);
  const double exact = g.entropy();
  std::pair<double, double> bracket{0.5 * exact, 1.5 * exact};
  if (!cfg["bracket"].is_null()) {
    const auto b = cfg["bracket"].get<std::vector<double>>();
    if (b.size() != 2) {
      throw ConfigError("bracket must have two entries");
    }
    bracket = {b[0], b[1]};
  }
  CriticalExponentOptions opts;
  opts.radius = cfg["radius"].get<double>();
  opts.tolerance = cfg["tolerance"].get<double>();
  opts.angular_nodes = cfg["angular_nodes"].get<int>();
  const double estimate = critical_exponent_estimate(g, y, bracket, opts);
  const double rel = std::abs(estimate - exact) / exact;
  Outcome o;
  o.results = {{"estimate", estimate}, {"exact", exact}, {"relative_error", rel}, {"bracket", {bracket.first, bracket.second}}};
  o.violation = rel > opts.tolerance;
  return o;
}

Outcome ps_concentration(const json& cfg) {
  const auto factors = factors_of(cfg);
  FurstenbergPoint theta0 = [&] {
    if (!cfg["theta0"].is_null()) {
      return boundary_from_json(cfg["theta0"]);
    }
    std::vector<Vec> dirs;
    for (const auto& f : factors) {
      Vec t = Vec::Zero(f.n);
      t(0) = 1.0;
      dirs.push_back(t);
    }
    return FurstenbergPoint(dirs);
  }();
  const auto scheme_name = cfg["scheme"].get<std::string>();
  if (scheme_name != "transported" && scheme_name != "importance") {
    throw ConfigError("scheme must be \"transported\" or \"importance\"");
  }
  const PsScheme scheme = scheme_name == "transported" ? PsScheme::Transported : PsScheme::ImportanceUniform;
  const double angle = cfg["angle"].get<double>();
  const auto n = cfg["n"].get<std::size_t>();
  const double per_factor = 1.0 / std::sqrt(static_cast<double>(factors.size()));

  Outcome o;
  o.table.header = {"t", "cap_mass", "std_error", "ess"};
  double prev = 0.0;
  double prev_err = 0.0;
  bool monotone = true;
  for (double t : numbers(cfg["t"])) {
    std::vector<Vec> coords;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      Vec x(factors[i].n + 1);
      x(0) = std::cosh(t * per_factor);
      x.tail(factors[i].n) = std::sinh(t * per_factor) * theta0.factor(i);
      coords.push_back(x);
    }
    const auto m = sample_ps(ProductPoint(coords), n, seed_of(cfg), scheme);
    const auto est = cap_mass_estimate(m, theta0, angle);
    if (est.mass < prev - 3.0 * std::hypot(est.std_error, prev_err)) {
      monotone = false;
    }
    prev = est.mass;
    prev_err = est.std_error;
    append(o.warnings, m.warnings());
    o.table.rows.push_back({t, est.mass, est.std_error, m.ess()});
  }
  const double warn_at = cfg["warn_mass"].get<double>();
  const double fail_at = cfg["fail_mass"].get<double>();
  o.results = {{"final_cap_mass", prev}, {"monotone_within_3_sigma", monotone}};
  if (!monotone) {
    o.violation = true;
    o.warnings.push_back("cap mass decreased by more than 3 standard errors along the ray");
  }
  if (prev < fail_at) {
    o.violation = true;
    o.warnings.push_back("final cap mass " + std::to_string(prev) + " is below " + std::to_string(fail_at));
  } else if (prev < warn_at) {
    o.warnings.push_back("final cap mass " + std::to_string(prev) + " is below " + std::to_string(warn_at));
  }
  return o;
}

Outcome barycenter_scan(const json& cfg) {
  const auto g = metric_of(cfg);
  const auto target = minimal_entropy_metric(g.factors());
  const auto ss = exponents(cfg, g);
  const auto ys = scan_points(cfg, g);
  const NaturalMapConfig mc = map_config(cfg);
  Outcome o;
  o.table.header = {"point", "s", "d_p_y", "d_y_image", "grad_norm", "iterations", "hess_min_eig", "ess"};
  double worst = 0.0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    for (double s : ss) {
      const auto r = natural_map(g, ys[k], s, mc);
      const double d = product_distance(target, ys[k], r.barycenter.point);
      worst = std::max(worst, d);
      append(o.warnings, r.warnings);
      o.table.rows.push_back({k, s, basepoint_distance(g, ys[k]), d, r.barycenter.grad_norm, r.barycenter.iterations,
                              r.barycenter.hess_min_eig, r.ess});
    }
  }
  o.results = {{"evaluations", o.table.rows.size()}, {"max_d_y_image", worst}};
  if (ys.size() == 1 && ss.size() == 1) {
    const auto r = natural_map(g, ys[0], ss[0], mc);
    o.results["image"] = point_to_json(r.barycenter.point);
  }
  return o;
}

Outcome jacobian_scan(const json& cfg) {
  const auto g = metric_of(cfg);
  const auto ss = exponents(cfg, g);
  const auto ys = scan_points(cfg, g);
  const NaturalMapConfig mc = map_config(cfg);
  const double eps = cfg["eps"].get<double>();
  const double bound_tol = cfg["bound_tolerance"].get<double>();
  const bool richardson = cfg["richardson"].get<bool>();
  const double richardson_tol = cfg["richardson_tolerance"].get<double>();
  Outcome o;
  o.table.header = {"point", "s", "d_p_y", "jac_det", "bound", "ratio", "homothety_deviation",
                    "violation", "ess_min", "jac_det_half_step", "richardson_rel"};
  std::size_t violations = 0;
  double max_ratio = 0.0;
  double max_richardson = 0.0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    for (double s : ss) {
      const auto r = jacobian_fd(g, ys[k], s, eps, mc, bound_tol);
      json half = nullptr;
      json rel = nullptr;
      if (richardson) {
        const double h = jacobian_fd(g, ys[k], s, eps / 2.0, mc, bound_tol).jac_det;
        const double d = std::abs(h - r.jac_det) / std::abs(r.jac_det);
        max_richardson = std::max(max_richardson, d);
        half = h;
        rel = d;
        if (d > richardson_tol) {
          o.warnings.push_back("point " + std::to_string(k) + ": step-halving changes the determinant by " +
                               std::to_string(d));
        }
      }
      violations += r.violation ? 1 : 0;
      max_ratio = std::max(max_ratio, r.ratio);
      o.table.rows.push_back({k, s, basepoint_distance(g, ys[k]), r.jac_det, r.bound, r.ratio, r.homothety_deviation,
                              r.violation, r.ess_min, half, rel});
    }
  }
  o.results = {{"evaluations", o.table.rows.size()}, {"violations", violations}, {"max_ratio", max_ratio}};
  if (richardson) {
    o.results["max_richardson_rel"] = max_richardson;
  }
  o.violation = violations > 0;
  return o;
}

Outcome determinant_fuzz(const json& cfg) {
  const int n = cfg["n"].get<int>();
  const int d = cfg["d"].get<int>();
  const auto r = fuzz_determinant_functional(n, d, cfg["trials"].get<std::size_t>(), seed_of(cfg), false);
  Outcome o;
  o.results = {{"n", n},
               {"d", d},
               {"trials", r.trials},
               {"bound", determinant_bound(n, d)},
               {"violations", r.violations},
               {"domain_errors", r.domain_errors},
               {"max_ratio", r.max_ratio},
               {"argmax_trial", r.argmax_trial}};
  if (r.counterexample) {
    o.results["argmax_H"] = matrix_to_json(*r.counterexample);
  }
  if (cfg["maximize"].get<bool>()) {
    const auto m = maximize_determinant_functional(n, d, seed_of(cfg));
    o.results["maximize"] = {{"value", m.value},
                             {"bound", m.bound},
                             {"iterations", m.iterations},
                             {"distance_to_center", m.distance_to_center}};
  }
  o.violation = r.violations > 0;
  return o;
}

Outcome blockdet(const json& cfg) {
  const auto r = fuzz_block_det(cfg["trials"].get<std::size_t>(), seed_of(cfg), false);
  Outcome o;
  o.results = {{"trials", r.trials}, {"violations", r.violations}, {"max_ratio", r.max_ratio}};
  o.violation = r.violations > 0;
  return o;
}

const json kH3H3 = json::array({json::array({3, 1}), json::array({3, 1})});
const json kSkew = json::array({1.3, 1.0 / 1.3});

std::vector<Key> scan_keys(json beta, json s_multiplier, std::size_t points, std::size_t n) {
  return {
      {"factors", kH3H3, Kind::Factors, "factor list [[n, d], ...]"},
      {"beta", std::move(beta), Kind::Beta, "domain metric scales"},
      {"s", nullptr, Kind::NumberOrList, "exponent(s); overrides s_multiplier"},
      {"s_multiplier", std::move(s_multiplier), Kind::NumberOrList, "exponent(s) as multiples of h(g_beta)"},
      {"y", nullptr, Kind::Json, "explicit point; replaces the random scan"},
      {"points", points, Kind::Count, "number of random scan points"},
      {"radius", 2.0, Kind::Number, "scan points lie within this distance of the basepoint"},
      {"n_z", n, Kind::Count, "interior sample size"},
      {"n_theta", n, Kind::Count, "boundary sample size per interior atom (atomic inner average)"},
      {"inner", "exact", Kind::Text, "inner average: exact or atomic"},
      {"tol", 1e-8, Kind::Number, "barycenter gradient tolerance"},
  };
}

}  // namespace

std::vector<Command> commands() {
  std::vector<Command> out;
  out.push_back({"optimal-metric",
                 "Closed-form minimal-entropy scales checked against a numeric optimizer",
                 {{"factors", json::array({json::array({3, 1}), json::array({4, 1})}), Kind::Factors,
                   "factor list [[n, d], ...]"},
                  {"tolerance", 1e-6, Kind::Number, "relative agreement required"}},
                 optimal_metric});
  out.push_back({"entropy",
                 "Critical-exponent estimate of the volume entropy",
                 {{"factors", json::array({json::array({3, 1})}), Kind::Factors, "factor list [[n, d], ...]"},
                  {"beta", "unscaled", Kind::Beta, "metric scales"},
                  {"y", nullptr, Kind::Json, "centre point (default basepoint)"},
                  {"radius", 60.0, Kind::Number, "truncation radius of the Poincare series integral"},
                  {"tolerance", 0.02, Kind::Number, "relative tolerance"},
                  {"bracket", nullptr, Kind::Json, "[lo, hi] exponent bracket"},
                  {"angular_nodes", 0, Kind::Integer, "angular quadrature nodes (0: automatic)"}},
                 entropy});
  out.push_back({"ps-concentration",
                 "Cap mass of Patterson-Sullivan measures along a regular ray",
                 {{"factors", kH3H3, Kind::Factors, "factor list [[n, d], ...]"},
                  {"theta0", nullptr, Kind::Json, "ray endpoint (default first axis in each factor)"},
                  {"angle", 0.2, Kind::Number, "cap angle"},
                  {"t", json::array({1, 2, 4, 8}), Kind::NumberOrList, "distances along the ray"},
                  {"n", 100000, Kind::Count, "sample size"},
                  {"scheme", "transported", Kind::Text, "transported or importance"},
                  {"warn_mass", 0.95, Kind::Number, "final cap mass below this warns"},
                  {"fail_mass", 0.90, Kind::Number, "final cap mass below this fails"}},
                 ps_concentration});
  out.push_back({"barycenter", "Natural map images F_s(y)", scan_keys("optimal", 1.1, 1, 10000), barycenter_scan});
  auto jac = scan_keys(kSkew, 1.1, 20, 10000);
  jac.push_back({"eps", 1e-3, Kind::Number, "finite-difference step"});
  jac.push_back({"bound_tolerance", 0.1, Kind::Number, "relative slack on the Jacobian bound"});
  jac.push_back({"richardson", true, Kind::Boolean, "repeat at half step"});
  jac.push_back({"richardson_tolerance", 0.05, Kind::Number, "step-halving agreement"});
  out.push_back({"jacobian-scan", "Finite-difference Jacobians of the natural map against the bound", jac,
                 jacobian_scan});
  out.push_back({"lemma55",
                 "Fuzz the determinant functional against its bound",
                 {{"n", 3, Kind::Integer, "matrix size"},
                  {"d", 1, Kind::Integer, "division algebra dimension (1, 2 or 4)"},
                  {"trials", 1000, Kind::Count, "fuzz trials"},
                  {"maximize", false, Kind::Boolean, "also locate the maximizer numerically"}},
                 determinant_fuzz});
  out.push_back({"blockdet",
                 "Fuzz the block determinant estimate",
                 {{"trials", 1000, Kind::Count, "fuzz trials"}},
                 blockdet});
  return out;
}

}  // namespace minent::cli
