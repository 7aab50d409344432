// Copyright 2026 The slb Authors.
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

#include "slb/stoploss.hpp"

#include <algorithm>
#include <cmath>

#include "slb/errors.hpp"
#include "slb/numeric.hpp"

namespace slb {

namespace {

// E(X - z)^+ at z = 0..m via call(z) = call(z + 1) + P(X > z), built from the
// top so that only non-negative terms are ever added.
std::vector<double> integer_calls(const IntegerPmf& pmf, std::size_t m) {
  std::vector<double> calls(m + 1, 0.0);
  CompensatedSum tail;
  CompensatedSum call;
  for (std::size_t z = m; z-- > 0;) {
    tail.add(pmf.at(static_cast<long long>(z) + 1));
    call.add(tail.value());
    calls[z] = call.value();
  }
  return calls;
}

}  // namespace

StopLossCurve stoploss_distance_exact(const IntegerPmf& x, const IntegerPmf& y) {
  const std::size_t m = std::max(x.max_support(), y.max_support());
  const auto cx = integer_calls(x, m);
  const auto cy = integer_calls(y, m);
  StopLossCurve curve;
  curve.z_grid.resize(m + 1);
  curve.diffs.resize(m + 1);
  for (std::size_t z = 0; z <= m; ++z) {
    curve.z_grid[z] = static_cast<double>(z);
    curve.diffs[z] = cx[z] - cy[z];
    if (std::abs(curve.diffs[z]) > curve.sup_abs) {
      curve.sup_abs = std::abs(curve.diffs[z]);
      curve.argsup = curve.z_grid[z];
    }
  }
  return curve;
}

double stoploss_distance_grid_check(const IntegerPmf& x, const IntegerPmf& y, int resolution) {
  if (resolution < 2) throw DomainError("stoploss_distance_grid_check: resolution must be >= 2");
  const double m = static_cast<double>(std::max(x.max_support(), y.max_support()));
  const long long steps = static_cast<long long>(std::ceil((m + 2.0) * resolution));
  double sup = 0.0;
  for (long long s = 0; s <= steps; ++s) {
    const double z = -1.0 + static_cast<double>(s) / resolution;
    sup = std::max(sup, std::abs(call_expectation(x, z) - call_expectation(y, z)));
  }
  return sup;
}

}  // namespace slb
