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

#include <optional>
#include <string>
#include <vector>

#include "slb/bounds.hpp"
#include "slb/cdo.hpp"
#include "slb/config.hpp"
#include "slb/corpus.hpp"
#include "slb/format.hpp"
#include "slb/stoploss.hpp"

namespace slb {

/// Poisson and the two independent-case bounds on the built-in portfolio prefixes n = 10, ..., 100.
std::vector<ComparisonRow> compute_comparison();
std::string render_comparison(const std::vector<ComparisonRow>& rows, OutputFormat format);

std::string render_report(const BoundReport& report, OutputFormat format);

struct PriceRow {
  TrancheSpec spec;
  double z = 0.0;
  std::optional<double> exact;
  std::optional<TrancheBracket> bracket;
  std::string error;
};

std::vector<PriceRow> price_tranches(const RunConfig& config, const BoundReport& report);
std::string render_prices(const std::vector<PriceRow>& rows, const BoundReport& report, OutputFormat format);

enum class DslTarget { Binomial, Poisson };

struct DslResult {
  DslTarget target = DslTarget::Binomial;
  std::optional<BinomialParams> params;
  double lambda = 0.0;
  StopLossCurve curve;
};

/// d_sl between the exact loss law and binomial (moment fit, else alpha = n)
/// or Poisson(sum p_i).
DslResult exact_dsl(const RunConfig& config, DslTarget target);
std::string render_dsl(const DslResult& result, OutputFormat format);

}  // namespace slb
