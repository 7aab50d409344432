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

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "slb/pmf.hpp"

namespace slb::testing {

/// Random pmf on 0..max_support with a random number of zero entries.
inline IntegerPmf random_pmf(std::mt19937_64& rng, std::size_t max_support) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(max_support + 1);
  double total = 0.0;
  for (auto& x : v) {
    x = u(rng) < 0.2 ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0.0) {
    v[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : v) x /= total;
  return IntegerPmf(std::move(v));
}

/// Reference portfolio marginals: blocks of twenty at 0.06, 0.07, 0.08, 0.09, 0.10.
inline std::vector<double> reference_prefix(std::size_t n) {
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = 0.06 + 0.01 * static_cast<double>(i / 20);
  return p;
}

/// Direct sum of (k - z)^+ P(k), kept separate from the library routine.
inline double naive_call(const IntegerPmf& pmf, double z) {
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double e = static_cast<double>(k) - z;
    if (e > 0) s += e * pmf.probs()[k];
  }
  return s;
}

}  // namespace slb::testing
