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

#ifndef MINENT_SERIALIZATION_HPP
#define MINENT_SERIALIZATION_HPP

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <vector>

#include "minent/geometry.hpp"
#include "minent/measures.hpp"

namespace minent {

using json = nlohmann::json;

/// Factor lists are [[n, d], ...]; a bare integer n means d = 1.
std::vector<FactorSpec> factors_from_json(const json& j);
json factors_to_json(const std::vector<FactorSpec>& factors);

/// {"factors": [[n, d], ...], "scales": [...]}
json metric_to_json(const ScaledProductMetric& metric);
ScaledProductMetric metric_from_json(const json& j);

/// Factor-major arrays of hyperboloid coordinates.
json point_to_json(const ProductPoint& x);
ProductPoint point_from_json(const json& j);

json boundary_to_json(const FurstenbergPoint& theta);
FurstenbergPoint boundary_from_json(const json& j);

json matrix_to_json(const Mat& m);

/// One atom per line: {"theta": [[...], [...]], "w": ...}.
void write_measure_jsonl(std::ostream& os, const AtomicBoundaryMeasure& measure);
AtomicBoundaryMeasure read_measure_jsonl(std::istream& is);

}  // namespace minent

#endif  // MINENT_SERIALIZATION_HPP
