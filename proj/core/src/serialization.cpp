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

#include "minent/serialization.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "minent/errors.hpp"

namespace minent {
namespace {

Vec vector_from_json(const json& j) {
  if (!j.is_array()) {
    throw ConfigError("expected a numeric array");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError("expected a numeric array");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

std::vector<FactorSpec> factors_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("factors must be a non-empty array");
  }
  std::vector<FactorSpec> out;
  for (const auto& f : j) {
    if (f.is_number_integer()) {
      out.emplace_back(f.get<int>(), 1);
    } else if (f.is_array() && f.size() == 2 && f[0].is_number_integer() && f[1].is_number_integer()) {
      out.emplace_back(f[0].get<int>(), f[1].get<int>());
    } else {
      throw ConfigError("each factor must be n or [n, d]");
    }
  }
  return out;
}

json factors_to_json(const std::vector<FactorSpec>& factors) {
  json out = json::array();
  for (const auto& f : factors) {
    out.push_back({f.n, f.d});
  }
  return out;
}

json metric_to_json(const ScaledProductMetric& metric) {
  return {{"factors", factors_to_json(metric.factors())}, {"scales", metric.scales()}};
}

ScaledProductMetric metric_from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors") || !j.contains("scales")) {
    throw ConfigError("metric needs \"factors\" and \"scales\"");
  }
  return {factors_from_json(j.at("factors")), j.at("scales").get<std::vector<double>>()};
}

json point_to_json(const ProductPoint& x) {
  json out = json::array();
  for (const auto& xi : x.coords()) {
    out.push_back(vector_to_json(xi));
  }
  return out;
}

ProductPoint point_from_json(const json& j) {
  if (!j.is_array()) {
    throw ConfigError("a point is an array of factor coordinate arrays");
  }
  std::vector<Vec> coords;
  for (const auto& f : j) {
    coords.push_back(vector_from_json(f));
  }
  return ProductPoint(std::move(coords));
}

json boundary_to_json(const FurstenbergPoint& theta) {
  json out = json::array();
  for (const auto& t : theta.directions()) {
    out.push_back(vector_to_json(t));
  }
  return out;
}

FurstenbergPoint boundary_from_json(const json& j) {
  if (!j.is_array()) {
    throw ConfigError("a boundary point is an array of direction arrays");
  }
  std::vector<Vec> dirs;
  for (const auto& f : j) {
    dirs.push_back(vector_from_json(f));
  }
  return FurstenbergPoint(std::move(dirs), 1e-9);
}

json matrix_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_to_json(m.row(r).transpose()));
  }
  return out;
}

void write_measure_jsonl(std::ostream& os, const AtomicBoundaryMeasure& measure) {
  for (std::size_t j = 0; j < measure.size(); ++j) {
    json theta = json::array();
    for (std::size_t i = 0; i < measure.rank(); ++i) {
      theta.push_back(vector_to_json(measure.directions(i).col(static_cast<Eigen::Index>(j))));
    }
    os << json{{"theta", theta}, {"w", measure.weights()(static_cast<Eigen::Index>(j))}}.dump() << '\n';
  }
}

AtomicBoundaryMeasure read_measure_jsonl(std::istream& is) {
  std::vector<FurstenbergPoint> atoms;
  std::vector<double> weights;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const json j = json::parse(line);
    atoms.push_back(boundary_from_json(j.at("theta")));
    weights.push_back(j.at("w").get<double>());
  }
  Vec w = Eigen::Map<Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return AtomicBoundaryMeasure::from_atoms(atoms, w);
}

}  // namespace minent
