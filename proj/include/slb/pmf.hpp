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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace slb {

/// A probability mass function on 0..m. Entries are non-negative and sum to 1
/// within 1e-12; trailing zeros are permitted.
class IntegerPmf {
 public:
  /// Validates and takes ownership of `probs`. Throws DomainError on negative
  /// or non-finite entries, an empty vector, or a total off by more than 1e-12.
  explicit IntegerPmf(std::vector<double> probs);

  static IntegerPmf point_mass(std::size_t at);
  /// As the constructor, additionally recording how the entries were obtained.
  static IntegerPmf annotated(std::vector<double> probs, double renormalization,
                              double dropped_tail);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  /// Largest index with an allocated entry (not necessarily positive mass).
  std::size_t max_support() const { return probs_.size() - 1; }
  /// Mass at k; zero outside the stored range.
  double at(long long k) const;

  /// 1 unless the constructor that produced this pmf had to rescale.
  double renormalization() const { return renormalization_; }
  /// Mass omitted by truncation (truncated Poisson only).
  double dropped_tail() const { return dropped_tail_; }

 private:
  std::vector<double> probs_;
  double renormalization_ = 1.0;
  double dropped_tail_ = 0.0;
};

/// Parameters of the approximating binomial B(alpha, p) together with the
/// fractional remainder delta left over when alpha is forced to be an integer.
struct BinomialParams {
  long long alpha = 1;
  double p = 0.5;
  double q = 0.5;
  double delta = 0.0;

  /// Validated construction; q is stored as 1 - p.
  static BinomialParams make(long long alpha, double p, double delta = 0.0);
};

/// B(alpha, p) in log space; renormalized only if the raw total misses 1 by
/// more than 1e-12.
IntegerPmf binomial_pmf(const BinomialParams& params);

/// Law of a sum of independent Bernoulli(p_i). Empty input gives the point
/// mass at 0.
IntegerPmf poisson_binomial_pmf(std::span<const double> p_list);

/// Poisson(lambda) truncated where the omitted tail is provably below
/// `tail_eps`, then renormalized. The bound on the omitted mass is kept in
/// dropped_tail().
IntegerPmf poisson_pmf_truncated(double lambda, double tail_eps);

/// E(X - z)^+.
double call_expectation(const IntegerPmf& pmf, double z);

/// d_TV(Z, Z + 1) = (1/2) sum_k |P(Z = k) - P(Z = k - 1)|.
double dtv_shift(const IntegerPmf& pmf);
double dtv_shift(std::span<const double> probs);

/// Mean and variance by direct summation.
std::pair<double, double> mean_variance(const IntegerPmf& pmf);

}  // namespace slb
