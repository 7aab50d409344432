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

#include <concepts>
#include <vector>

#include "slb/errors.hpp"
#include "slb/pmf.hpp"

namespace slb {

/// Target B(alpha, p), threshold z >= 0 and the reference call value
/// E(B(alpha, p) - z)^+ that appears on the right of the Stein equation.
class SteinContext {
 public:
  SteinContext(const BinomialParams& params, double z);

  const BinomialParams& params() const { return params_; }
  double z() const { return z_; }
  double call_ref() const { return call_ref_; }

 private:
  BinomialParams params_;
  double z_;
  double call_ref_;
};

/// Solution g_z(k) of
///   ((alpha - k) p / q) g(k + 1) - k g(k) = (k - z)^+ - E(B - z)^+
/// with g(0) = 0, for 0 <= k <= alpha.
double stein_solution(const SteinContext& ctx, long long k);

/// g_z(0..alpha + 1); the final entry is the convention g(alpha + 1) = 0,
/// which only ever meets a zero coefficient in the operator.
std::vector<double> stein_table(const SteinContext& ctx);

/// ((alpha - k) p / q) g(k + 1) - k g(k).
template <typename G>
  requires std::invocable<const G&, long long>
double stein_operator(const SteinContext& ctx, const G& g, long long k) {
  const auto& bp = ctx.params();
  if (k < 0 || k > bp.alpha) throw DomainError("stein_operator: k outside [0, alpha]");
  const double lead = static_cast<double>(bp.alpha - k) * bp.p / bp.q;
  const double next = k == bp.alpha ? 0.0 : lead * g(k + 1);
  return next - static_cast<double>(k) * g(k);
}

/// Forward differences of g_z. delta_g needs k in [0, alpha - 1], delta2_g
/// needs k in [0, alpha - 2].
double delta_g(const SteinContext& ctx, long long k);
double delta2_g(const SteinContext& ctx, long long k);

/// Non-uniform bound on |Delta g_z(k)| valid for all z >= 0:
///   2 q^(1 - alpha) - q  at k = 0,   2 q^(k - alpha)  for 1 <= k <= alpha.
double dg_uniform_bound(const BinomialParams& params, long long k);
/// Same shape with the leading constant 2 replaced; used by the
/// verification harness to check that a weakened constant is detected.
double dg_uniform_bound_scaled(const BinomialParams& params, long long k, double constant);

/// Bound on |Delta g_z(k)| for z > 1 and 1 <= k <= alpha, three branches:
///   k >= z:          2 (1 + (q^(k - alpha) - 1) / (q z))
///   2 <= k < z:      3 (q^(k - alpha) - 1) / (p z)
///   k = 1 < z:       2 (alpha - 1) p q^(1 - alpha) / z
/// The k = 1 < z branch is not a valid bound in general (see
/// dg_tail_k1_refuted); it is still returned verbatim.
double dg_tail_bound(const BinomialParams& params, long long k, double z);

/// True for the k = 1 < z branch, which has explicit counterexamples
/// (alpha = 2, p = 0.05, z = 1.5 gives |Delta g(1)| = 0.2375 > 0.0702).
bool dg_tail_k1_refuted(long long k, double z);

/// 2 q^(1 - alpha), valid for every k and z >= 0.
double uniform_delta_bound(const BinomialParams& params);

/// Minimum over the constant bound, the uniform bound and, where it applies
/// and is not refuted, the tail bound.
double best_delta_bound(const BinomialParams& params, long long k, double z);

/// |g_z(k)| <= 2 q^(k - alpha).
double g_bound(const BinomialParams& params, long long k);

}  // namespace slb
