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

#include <vector>

#include "slb/pmf.hpp"

namespace slb {

/// z -> E(X - z)^+ - E(Y - z)^+ sampled at its kinks.
///
/// The difference is piecewise linear with kinks only at the integers, equals
/// EX - EY for every z <= 0 and vanishes beyond both supports, so its supremum
/// modulus over the real line is attained on z_grid = {0, 1, ..., m}.
struct StopLossCurve {
  std::vector<double> z_grid;
  std::vector<double> diffs;
  double sup_abs = 0.0;
  /// Smallest grid point attaining sup_abs. A value of 0 also stands for the
  /// whole z <= 0 plateau.
  double argsup = 0.0;
};

/// Exact stop-loss distance sup_z |E(X - z)^+ - E(Y - z)^+| in O(m).
StopLossCurve stoploss_distance_exact(const IntegerPmf& x, const IntegerPmf& y);

/// Brute-force supremum over a uniform grid with `resolution` points per unit
/// on [-1, m + 1]. Each call curve is 1-Lipschitz, so this is within
/// 2 / resolution of the exact value.
double stoploss_distance_grid_check(const IntegerPmf& x, const IntegerPmf& y, int resolution);

}  // namespace slb
