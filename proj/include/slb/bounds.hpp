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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slb/dependence.hpp"
#include "slb/pmf.hpp"

namespace slb {

enum class IngredientMode { Exact, MonteCarlo, ClosedForm };

/// Which approximating law a bound refers to.
enum class ParamFamily { AlphaN, MomentMatched, Chosen, Poisson };

std::string to_string(IngredientMode mode);
std::string to_string(ParamFamily family);

struct BoundValue {
  double value = 0.0;
  /// Standard error from Monte Carlo ingredients; 0 for exact evaluation.
  double se = 0.0;
  /// Set when the formula evaluated negative and was raised to 0.
  bool clamped = false;
  /// Value before clamping.
  double raw = 0.0;
};

BinomialParams fit_alpha_n(const PortfolioModel& model);

BinomialParams fit_moment_matching(const LossMoments& moments);
BinomialParams fit_moment_matching(const PortfolioModel& model, const EnumerationLimits& limits = {});

/// alpha = floor(sum p_i / p_chosen) with snapping, delta the remainder.
BinomialParams fit_chosen_p(const PortfolioModel& model, double p_chosen);

/// Var W from the local terms: only pairs inside A_i covary.
LossMoments moments_from_terms(const DependentTerms& terms, const std::vector<Neighborhood>& hoods);

BoundValue bound_dependent_alpha_n(const BinomialParams& params, const DependentTerms& terms);
double bound_independent_alpha_n(const PortfolioModel& model, const BinomialParams& params);
BoundValue bound_dependent_moment(const BinomialParams& params, const DependentTerms& terms);
double bound_independent_moment(const PortfolioModel& model, const BinomialParams& params);
BoundValue bound_dependent_chosen_p(const BinomialParams& params, const DependentTerms& terms);
BoundValue bound_dependent_moment_star(const BinomialParams& params, const DependentTerms& terms);
double bound_poisson_existing(const PortfolioModel& model);

struct BoundEntry {
  std::string name;
  double value = 0.0;
  double se = 0.0;
  bool applicable = false;
  bool clamped = false;
  double raw = 0.0;
  IngredientMode mode = IngredientMode::ClosedForm;
  ParamFamily family = ParamFamily::AlphaN;
  std::optional<BinomialParams> params;
  /// d_sl between W_n and this entry's own approximating law.
  std::optional<double> exact_dsl;
  std::string note;

  /// A negative raw value cannot bound a distance; the formula failed there.
  bool failed() const { return clamped && raw < -1e-12; }
  bool certified() const { return applicable && mode != IngredientMode::MonteCarlo && !failed(); }
};

struct BoundOptions {
  std::optional<double> p_chosen;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 20240607;
  bool force_monte_carlo = false;
  bool compute_exact = true;
  EnumerationLimits limits;
};

struct BoundReport {
  std::optional<BinomialParams> fitted;
  ParamFamily fitted_family = ParamFamily::AlphaN;
  std::vector<BoundEntry> entries;
  double poisson_lambda = 0.0;
  /// d_sl between W_n and binomial(fitted).
  std::optional<double> exact_dsl;
  std::string best_name;
  double best_value = 0.0;
  double best_se = 0.0;
  bool best_certified = false;
  IngredientMode terms_mode = IngredientMode::Exact;
  std::size_t fallback_strata = 0;
  std::vector<std::string> errors;

  const BoundEntry* find(const std::string& name) const;
};

/// Entry names in report order.
inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names{"dep_alpha_n", "indep_alpha_n", "dep_moment", "indep_moment",
                                              "dep_chosen_p",      "dep_moment_star",       "poisson"};
  return names;
}

BoundReport compile_report(const PortfolioModel& model, const BoundOptions& options = {});

}  // namespace slb
