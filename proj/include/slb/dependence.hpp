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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "slb/pmf.hpp"

namespace slb {

/// Index sets with i in A_i subset-of B_i (0-based, sorted). X_i is
/// independent of the indicators outside A_i, and the block X_{A_i} is
/// independent of the indicators outside B_i.
struct Neighborhood {
  std::vector<int> a;
  std::vector<int> b;
  bool operator==(const Neighborhood&) const = default;
};

struct IndependentLaw {};

/// Full joint table over {0,1}^n; entry index has bit i set iff X_i = 1.
struct ExplicitJointLaw {
  std::vector<double> table;
};

/// X_i = 1{(1 - theta) U_i + theta U_{i+1} > t_i} over i.i.d. uniforms
/// U_0..U_n, with t_i calibrated so that P(X_i = 1) = p_i. Indicators two or
/// more apart share no latent, so A_i has radius 1 and B_i radius 2.
struct LatentOneDependentLaw {
  double theta = 0.5;
  std::vector<double> thresholds;
};

/// Fills `x` (length n, entries 0/1) with the draw for (seed, sample).
using SamplerFn = std::function<void(std::uint64_t seed, std::uint64_t sample, std::span<std::uint8_t> x)>;

struct SamplerLaw {
  SamplerFn draw;
};

using PortfolioLaw = std::variant<IndependentLaw, ExplicitJointLaw, LatentOneDependentLaw, SamplerLaw>;

enum class LawKind { Independent, ExplicitJoint, LatentOneDependent, SamplerOnly };

std::string to_string(LawKind kind);

/// n Bernoulli default indicators: marginals, local-dependence neighborhoods
/// and the joint law.
class PortfolioModel {
 public:
  static PortfolioModel independent(std::vector<double> p_list);
  /// Neighborhoods default to A_i = B_i = {0..n-1}, which is always valid.
  static PortfolioModel explicit_joint(std::vector<double> p_list, std::vector<double> table,
                                       std::vector<Neighborhood> neighborhoods = {});
  static PortfolioModel latent_one_dependent(std::vector<double> p_list, double theta);
  static PortfolioModel sampler(std::vector<double> p_list, std::vector<Neighborhood> neighborhoods,
                                SamplerFn draw);

  std::size_t n() const { return p_list_.size(); }
  std::span<const double> p_list() const { return p_list_; }
  const std::vector<Neighborhood>& neighborhoods() const { return neighborhoods_; }
  const PortfolioLaw& law() const { return law_; }
  LawKind kind() const;

  /// Replaces the neighborhoods after validating i in A_i subset-of B_i.
  PortfolioModel with_neighborhoods(std::vector<Neighborhood> neighborhoods) const;

 private:
  PortfolioModel(std::vector<double> p_list, std::vector<Neighborhood> neighborhoods, PortfolioLaw law);

  std::vector<double> p_list_;
  std::vector<Neighborhood> neighborhoods_;
  PortfolioLaw law_;
};

std::vector<Neighborhood> singleton_neighborhoods(std::size_t n);
std::vector<Neighborhood> window_neighborhoods(std::size_t n, int radius_a, int radius_b);

/// Limits on exhaustive evaluation. Tables hold 2^n entries; the latent
/// model costs about 2^n n^3 operations.
struct EnumerationLimits {
  int max_table_n = 22;
  int max_latent_n = 16;
};

/// Threshold t with P((1 - theta) U + theta V > t) = p, by bisection.
double latent_threshold(double p, double theta);
/// P((1 - theta) U + theta V > t) in closed form.
double latent_exceedance(double t, double theta);

/// Joint table of (X_start, ..., X_{start+len-1}) for the latent model,
/// integrating the latents exactly with piecewise polynomials.
std::vector<double> latent_window_table(const LatentOneDependentLaw& law, std::size_t start,
                                        std::size_t len);

/// Joint table over {0,1}^n for enumerable models. Throws SizeError when the
/// model is too large and ApplicabilityError for sampler-only models.
std::vector<double> joint_table(const PortfolioModel& model, const EnumerationLimits& limits = {});

/// Exact law of W_n. Independent models use the Poisson-binomial recursion
/// for any n; other laws are enumerated.
IntegerPmf exact_loss_pmf(const PortfolioModel& model, const EnumerationLimits& limits = {});

struct LossMoments {
  double mean = 0.0;
  double variance = 0.0;
  /// E W - Var W, kept separately because it cancels badly when formed from
  /// the two moments.
  double mean_minus_variance = 0.0;
};

/// Exact first two moments of W_n (independent, enumerable, or latent of any
/// size). Throws ApplicabilityError for sampler-only models.
LossMoments loss_moments(const PortfolioModel& model, const EnumerationLimits& limits = {});

enum class TermsMode { Exact, MonteCarlo };

/// Law of (X_i, X_{A_i}, X_{B_i}, W_i^*) for one index, where X_S is the sum
/// over S and W_i^* = W_n - X_{B_i}. Every expectation in the bounds is a
/// functional of these local laws.
class LocalJoint {
 public:
  LocalJoint() = default;
  LocalJoint(int a_size, int b_size, int rest_size);

  int a_size() const { return a_size_; }
  int b_size() const { return b_size_; }
  int rest_size() const { return rest_size_; }

  double& at(int x, int sa, int sb, int w) { return mass_[index(x, sa, sb, w)]; }
  double at(int x, int sa, int sb, int w) const { return mass_[index(x, sa, sb, w)]; }
  std::span<const double> raw() const { return mass_; }

  /// Visits every cell with positive mass as f(x, sa, sb, w, mass).
  template <typename F>
  void for_each(F&& f) const {
    std::size_t idx = 0;
    for (int x = 0; x <= 1; ++x)
      for (int sa = 0; sa <= a_size_; ++sa)
        for (int sb = 0; sb <= b_size_; ++sb)
          for (int w = 0; w <= rest_size_; ++w, ++idx)
            if (mass_[idx] > 0.0) f(x, sa, sb, w, mass_[idx]);
  }

 private:
  std::size_t index(int x, int sa, int sb, int w) const {
    return ((static_cast<std::size_t>(x) * (a_size_ + 1) + sa) * (b_size_ + 1) + sb) * (rest_size_ + 1) + w;
  }

  int a_size_ = 0;
  int b_size_ = 0;
  int rest_size_ = 0;
  std::vector<double> mass_;
};

/// A value with its Monte Carlo standard error (0 when exact).
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// D(W_i^* | stratum) = 2 d_TV(W_i^*, W_i^* + 1) under the conditional law,
/// for one outcome of the conditioning variables. Unused coordinates are -1.
struct Stratum {
  int x = -1;
  int sa = -1;
  int sb = -1;
  double prob = 0.0;
  /// P(X_i = 1, stratum).
  double prob_x1 = 0.0;
  double d = 0.0;
  /// Monte Carlo stratum below the population threshold: d is the safe value 2.
  bool fallback = false;
};

struct IndexSmoothing {
  std::vector<Stratum> given_a_b;
  std::vector<Stratum> given_x_a_b;
  std::vector<Stratum> given_b;
};

/// Ingredients of the dependent-case bounds.
struct DependentTerms {
  TermsMode mode = TermsMode::Exact;
  std::size_t n_samples = 0;
  std::vector<double> p_list;
  std::vector<LocalJoint> local;
  std::vector<IndexSmoothing> smoothing;
  /// Number of Monte Carlo strata that fell back to D = 2.
  std::size_t fallback_strata = 0;

  /// E f(X_i, X_{A_i}, X_{B_i}, W_i^*) with its standard error.
  template <typename F>
  Estimate expect(std::size_t i, F&& f) const {
    double m1 = 0.0, m2 = 0.0;
    local[i].for_each([&](int x, int sa, int sb, int w, double mass) {
      const double v = f(x, sa, sb, w);
      m1 += mass * v;
      m2 += mass * v * v;
    });
    Estimate e{m1, 0.0};
    if (mode == TermsMode::MonteCarlo && n_samples > 1) {
      const double var = (m2 - m1 * m1) * static_cast<double>(n_samples) / static_cast<double>(n_samples - 1);
      e.se = var > 0.0 ? std::sqrt(var / static_cast<double>(n_samples)) : 0.0;
    }
    return e;
  }
};

/// Minimum stratum population before an empirical D value is trusted.
inline constexpr std::size_t kMinStratumSamples = 50;

/// Exact ingredients by enumeration (or the product structure when
/// independent).
DependentTerms enumerate_terms(const PortfolioModel& model, const EnumerationLimits& limits = {});

/// Monte Carlo ingredients from n_samples draws; deterministic in `seed`.
DependentTerms sample_terms(const PortfolioModel& model, std::size_t n_samples, std::uint64_t seed);

/// The named expectations at a given binomial p (q = 1 - p).
struct IndexTermValues {
  Estimate xi_plus_p_q_wi;      // E[(X_i + p) q^{W_i}]
  Estimate pi_plus_qxi_q_wn;    // E[(p_i + q X_i) q^{W_n}]
  Estimate xi_xa;               // E[X_i X_{A_i}]
  Estimate xa;                  // E[X_{A_i}]
  Estimate q_wi;                // E[q^{W_i}]
  Estimate q_wstar;             // E[q^{W_i^*}]
};

struct TermValues {
  double p = 0.0;
  Estimate q_wn;
  std::vector<IndexTermValues> per_index;
};

TermValues evaluate_terms(const DependentTerms& terms, double p);

/// Largest deviation from factorization among the independences the bounds
/// rely on: X_i vs W_i, X_i vs W_i^*, and the pattern X_{A_i} vs W_i^*.
double local_dependence_violation(const PortfolioModel& model, const EnumerationLimits& limits = {});

}  // namespace slb
