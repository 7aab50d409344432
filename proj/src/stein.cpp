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

#include "slb/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slb/numeric.hpp"

namespace slb {

namespace {

double q_power(const BinomialParams& bp, double exponent) {
  return std::exp(exponent * std::log(bp.q));
}

// g_z(k) is a sum over j >= k with weights
//   (alpha-k)!/(alpha-j)! * (k-1)!/j! * (p/q)^(j-k) = pi_j / (k pi_k),
// accumulated as running ratios. Below the mode those weights grow and the
// sum cancels, so there the equivalent sum over j < k is used instead; the
// two agree because sum_j pi_j ((j - z)^+ - c) = 0.
double solve_at(const SteinContext& ctx, long long k) {
  const auto& bp = ctx.params();
  const double z = ctx.z();
  const double c = ctx.call_ref();
  const double odds = bp.p / bp.q;
  const auto mode = static_cast<long long>(std::floor(static_cast<double>(bp.alpha + 1) * bp.p));
  CompensatedSum sum;
  if (k >= mode) {
    double w = 1.0 / static_cast<double>(k);
    for (long long j = k; j <= bp.alpha; ++j) {
      sum.add(w * (positive_part(static_cast<double>(j) - z) - c));
      w *= static_cast<double>(bp.alpha - j) / static_cast<double>(j + 1) * odds;
    }
    return -sum.value();
  }
  double w = 1.0 / static_cast<double>(k);
  for (long long j = k - 1; j >= 0; --j) {
    w *= static_cast<double>(j + 1) / (static_cast<double>(bp.alpha - j) * odds);
    sum.add(w * (positive_part(static_cast<double>(j) - z) - c));
  }
  return sum.value();
}

}  // namespace

SteinContext::SteinContext(const BinomialParams& params, double z)
    : params_(params), z_(z), call_ref_(0.0) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("SteinContext: z must be >= 0");
  call_ref_ = call_expectation(binomial_pmf(params_), z_);
}

double stein_solution(const SteinContext& ctx, long long k) {
  if (k < 0 || k > ctx.params().alpha) {
    throw DomainError("stein_solution: k outside [0, alpha]");
  }
  if (k == 0) return 0.0;
  return solve_at(ctx, k);
}

std::vector<double> stein_table(const SteinContext& ctx) {
  const long long alpha = ctx.params().alpha;
  std::vector<double> g(static_cast<std::size_t>(alpha) + 2, 0.0);
  for (long long k = 1; k <= alpha; ++k) g[static_cast<std::size_t>(k)] = solve_at(ctx, k);
  return g;
}

double delta_g(const SteinContext& ctx, long long k) {
  if (k < 0 || k > ctx.params().alpha - 1) {
    throw DomainError("delta_g: k outside [0, alpha - 1]");
  }
  return stein_solution(ctx, k + 1) - stein_solution(ctx, k);
}

double delta2_g(const SteinContext& ctx, long long k) {
  if (k < 0 || k > ctx.params().alpha - 2) {
    throw DomainError("delta2_g: k outside [0, alpha - 2]");
  }
  return delta_g(ctx, k + 1) - delta_g(ctx, k);
}

double dg_uniform_bound_scaled(const BinomialParams& params, long long k, double constant) {
  if (k < 0 || k > params.alpha) throw DomainError("dg_uniform_bound: k outside [0, alpha]");
  const double alpha = static_cast<double>(params.alpha);
  if (k == 0) return constant * q_power(params, 1.0 - alpha) - params.q;
  return constant * q_power(params, static_cast<double>(k) - alpha);
}

double dg_uniform_bound(const BinomialParams& params, long long k) {
  return dg_uniform_bound_scaled(params, k, 2.0);
}

double dg_tail_bound(const BinomialParams& params, long long k, double z) {
  if (!(z > 1.0)) throw DomainError("dg_tail_bound: requires z > 1");
  if (k < 1 || k > params.alpha) throw DomainError("dg_tail_bound: k outside [1, alpha]");
  const double p = params.p;
  const double q = params.q;
  const double alpha = static_cast<double>(params.alpha);
  const double kd = static_cast<double>(k);
  if (kd >= z) return 2.0 * (1.0 + (q_power(params, kd - alpha) - 1.0) / (q * z));
  if (k >= 2) return 3.0 * (q_power(params, kd - alpha) - 1.0) / (p * z);
  return 2.0 * (alpha - 1.0) * p * q_power(params, 1.0 - alpha) / z;
}

bool dg_tail_k1_refuted(long long k, double z) {
  return k == 1 && static_cast<double>(k) < z;
}

double uniform_delta_bound(const BinomialParams& params) {
  return 2.0 * q_power(params, 1.0 - static_cast<double>(params.alpha));
}

double best_delta_bound(const BinomialParams& params, long long k, double z) {
  if (!(z >= 0.0)) throw DomainError("best_delta_bound: requires z >= 0");
  double best = std::min(uniform_delta_bound(params), dg_uniform_bound(params, k));
  if (z > 1.0 && k >= 1 && !dg_tail_k1_refuted(k, z)) {
    best = std::min(best, dg_tail_bound(params, k, z));
  }
  return best;
}

double g_bound(const BinomialParams& params, long long k) {
  if (k < 0 || k > params.alpha) throw DomainError("g_bound: k outside [0, alpha]");
  return 2.0 * q_power(params, static_cast<double>(k - params.alpha));
}

}  // namespace slb
