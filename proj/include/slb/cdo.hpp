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
#include <string>

#include "slb/bounds.hpp"
#include "slb/dependence.hpp"
#include "slb/pmf.hpp"

namespace slb {

struct TrancheSpec {
  double recovery = 0.4;
  /// Attachment or detachment point as a fraction of the portfolio notional.
  double z_star = 0.0;
  std::string label;

  void validate() const;
};

/// z = n z* / (1 - R), the loss-count threshold matching z*.
double z_from_zstar(const TrancheSpec& spec, std::size_t n);

/// E[(L - z*)^+] = ((1 - R) / n) E[(W - z)^+] for a given law of W.
double tranche_expected_loss(const IntegerPmf& loss, const TrancheSpec& spec, std::size_t n);

double tranche_expected_loss_exact(const PortfolioModel& model, const TrancheSpec& spec,
                                   const EnumerationLimits& limits = {});

struct TrancheBracket {
  double approx = 0.0;
  double half_width = 0.0;
  /// False when the bound behind the width used Monte Carlo ingredients;
  /// the width then includes four standard errors.
  bool certified = false;
  std::string bound_name;
  BinomialParams params;

  double lower() const { return approx - half_width; }
  double upper() const { return approx + half_width; }
};

TrancheBracket tranche_expected_loss_bracketed(std::size_t n, const TrancheSpec& spec, const BoundReport& report);

}  // namespace slb
