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

#include "slb/pmf.hpp"

#include <cmath>
#include <sstream>

#include "slb/errors.hpp"
#include "slb/numeric.hpp"

namespace slb {

namespace {

constexpr double kNormTol = 1e-12;

void validate_probs(const std::vector<double>& probs) {
  if (probs.empty()) throw DomainError("IntegerPmf: empty support");
  CompensatedSum total;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double v = probs[k];
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << "IntegerPmf: entry " << k << " is " << v;
      throw DomainError(os.str());
    }
    total.add(v);
  }
  if (std::abs(total.value() - 1.0) > kNormTol) {
    std::ostringstream os;
    os.precision(17);
    os << "IntegerPmf: total mass " << total.value() << " is not 1";
    throw DomainError(os.str());
  }
}

}  // namespace

IntegerPmf::IntegerPmf(std::vector<double> probs) : probs_(std::move(probs)) {
  validate_probs(probs_);
}

IntegerPmf IntegerPmf::annotated(std::vector<double> probs, double renormalization,
                                 double dropped_tail) {
  IntegerPmf out(std::move(probs));
  out.renormalization_ = renormalization;
  out.dropped_tail_ = dropped_tail;
  return out;
}

IntegerPmf IntegerPmf::point_mass(std::size_t at) {
  std::vector<double> probs(at + 1, 0.0);
  probs[at] = 1.0;
  return IntegerPmf(std::move(probs));
}

double IntegerPmf::at(long long k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= probs_.size()) return 0.0;
  return probs_[static_cast<std::size_t>(k)];
}

BinomialParams BinomialParams::make(long long alpha, double p, double delta) {
  if (alpha < 1) throw DomainError("BinomialParams: alpha must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("BinomialParams: p must lie in (0, 1)");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw DomainError("BinomialParams: delta must lie in [0, 1)");
  }
  return BinomialParams{alpha, p, 1.0 - p, delta};
}

IntegerPmf binomial_pmf(const BinomialParams& params) {
  const long long alpha = params.alpha;
  const double log_p = std::log(params.p);
  const double log_q = std::log1p(-params.p);
  const double lg_alpha = std::lgamma(static_cast<double>(alpha) + 1.0);
  std::vector<double> probs(static_cast<std::size_t>(alpha) + 1);
  CompensatedSum total;
  for (long long k = 0; k <= alpha; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = lg_alpha - std::lgamma(kd + 1.0) -
                            std::lgamma(static_cast<double>(alpha - k) + 1.0) +
                            kd * log_p + static_cast<double>(alpha - k) * log_q;
    probs[static_cast<std::size_t>(k)] = std::exp(log_term);
    total.add(probs[static_cast<std::size_t>(k)]);
  }
  double factor = 1.0;
  if (std::abs(total.value() - 1.0) > kNormTol) {
    factor = 1.0 / total.value();
    for (double& v : probs) v *= factor;
  }
  return IntegerPmf::annotated(std::move(probs), factor, 0.0);
}

IntegerPmf poisson_binomial_pmf(std::span<const double> p_list) {
  for (double p : p_list) {
    if (!(p > 0.0 && p < 1.0)) {
      throw DomainError("poisson_binomial_pmf: probabilities must lie in (0, 1)");
    }
  }
  // Each mass is carried as an unevaluated pair hi + lo so that rounding in
  // the two-term convolution is tracked rather than lost.
  const std::size_t n = p_list.size();
  std::vector<double> hi(n + 1, 0.0), lo(n + 1, 0.0);
  hi[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = p_list[i];
    const double q = 1.0 - p;
    for (std::size_t k = i + 2; k-- > 0;) {
      const double a = hi[k] * q;
      const double ea = std::fma(hi[k], q, -a);
      double b = 0.0, eb = 0.0, lo_prev = 0.0;
      if (k > 0) {
        b = hi[k - 1] * p;
        eb = std::fma(hi[k - 1], p, -b);
        lo_prev = lo[k - 1];
      }
      const double s = a + b;
      const double bb = s - a;
      const double es = (a - (s - bb)) + (b - bb);
      const double err = lo[k] * q + lo_prev * p + ea + eb + es;
      const double h = s + err;
      lo[k] = err - (h - s);
      hi[k] = h;
    }
  }
  std::vector<double> probs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) probs[k] = hi[k] + lo[k];
  return IntegerPmf(std::move(probs));
}

IntegerPmf poisson_pmf_truncated(double lambda, double tail_eps) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("poisson_pmf_truncated: lambda must be positive");
  }
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
    throw DomainError("poisson_pmf_truncated: tail_eps must lie in (0, 1)");
  }
  const double log_lambda = std::log(lambda);
  auto log_mass = [&](double k) { return -lambda + k * log_lambda - std::lgamma(k + 1.0); };
  std::vector<double> probs;
  CompensatedSum kept;
  double dropped = 0.0;
  for (long long m = 0;; ++m) {
    const double md = static_cast<double>(m);
    probs.push_back(std::exp(log_mass(md)));
    kept.add(probs.back());
    // For m + 2 > lambda the tail beyond m is dominated by a geometric series
    // with ratio lambda / (m + 2).
    if (md + 2.0 > lambda) {
      const double next = std::exp(log_mass(md + 1.0));
      const double bound = next / (1.0 - lambda / (md + 2.0));
      if (bound < tail_eps) {
        dropped = bound;
        break;
      }
    }
  }
  const double total = kept.value();
  for (double& v : probs) v /= total;
  return IntegerPmf::annotated(std::move(probs), 1.0 / total, dropped);
}

double call_expectation(const IntegerPmf& pmf, double z) {
  const auto probs = pmf.probs();
  if (z <= 0.0) {
    return mean_variance(pmf).first - z;
  }
  CompensatedSum sum;
  for (std::size_t k = probs.size(); k-- > 0;) {
    const double excess = static_cast<double>(k) - z;
    if (excess <= 0.0) break;
    sum.add(excess * probs[k]);
  }
  return sum.value();
}

double dtv_shift(std::span<const double> probs) {
  CompensatedSum sum;
  double prev = 0.0;
  for (double v : probs) {
    sum.add(std::abs(v - prev));
    prev = v;
  }
  sum.add(prev);
  const double d = 0.5 * sum.value();
  return d > 1.0 ? 1.0 : d;
}

double dtv_shift(const IntegerPmf& pmf) { return dtv_shift(pmf.probs()); }

std::pair<double, double> mean_variance(const IntegerPmf& pmf) {
  const auto probs = pmf.probs();
  CompensatedSum m;
  for (std::size_t k = 0; k < probs.size(); ++k) m.add(static_cast<double>(k) * probs[k]);
  const double mean = m.value();
  CompensatedSum v;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double d = static_cast<double>(k) - mean;
    v.add(d * d * probs[k]);
  }
  return {mean, v.value()};
}

}  // namespace slb
