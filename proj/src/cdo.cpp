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

#include "slb/cdo.hpp"

#include <cmath>
#include <sstream>

#include "slb/errors.hpp"

namespace slb {

void TrancheSpec::validate() const {
  if (!(recovery >= 0.0 && recovery < 1.0)) {
    std::ostringstream os;
    os << "tranche '" << label << "': recovery must lie in [0, 1), got " << recovery;
    throw DomainError(os.str());
  }
  if (!(z_star >= 0.0) || !std::isfinite(z_star)) {
    std::ostringstream os;
    os << "tranche '" << label << "': z_star must be non-negative, got " << z_star;
    throw DomainError(os.str());
  }
}

double z_from_zstar(const TrancheSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) throw DomainError("z_from_zstar: n must be positive");
  return static_cast<double>(n) * spec.z_star / (1.0 - spec.recovery);
}

double tranche_expected_loss(const IntegerPmf& loss, const TrancheSpec& spec, std::size_t n) {
  const double z = z_from_zstar(spec, n);
  return (1.0 - spec.recovery) / static_cast<double>(n) * call_expectation(loss, z);
}

double tranche_expected_loss_exact(const PortfolioModel& model, const TrancheSpec& spec,
                                   const EnumerationLimits& limits) {
  return tranche_expected_loss(exact_loss_pmf(model, limits), spec, model.n());
}

TrancheBracket tranche_expected_loss_bracketed(std::size_t n, const TrancheSpec& spec, const BoundReport& report) {
  if (report.best_name.empty() || !report.fitted) {
    throw ApplicabilityError("tranche bracket: the report has no applicable binomial bound");
  }
  TrancheBracket b;
  b.params = *report.fitted;
  b.bound_name = report.best_name;
  b.certified = report.best_certified;
  const double scale = (1.0 - spec.recovery) / static_cast<double>(n);
  b.approx = scale * call_expectation(binomial_pmf(b.params), z_from_zstar(spec, n));
  const double width = report.best_certified ? report.best_value : report.best_value + 4.0 * report.best_se;
  b.half_width = scale * width;
  return b;
}

}  // namespace slb
