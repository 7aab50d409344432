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
#include <string>
#include <vector>

#include "slb/corpus.hpp"

namespace slb {

struct SteinGrid {
  std::vector<long long> alphas;
  std::vector<double> ps;
};

/// The (alpha, p) grid of the Stein checks; the full grid adds larger alpha
/// and more extreme p.
SteinGrid stein_grid(CorpusLevel level);

/// The z values checked for a given alpha.
std::vector<double> stein_z_values(long long alpha);

struct SteinStats {
  double max_residual = 0.0;
  double max_mean = 0.0;
  std::size_t cases = 0;
};

SteinStats stein_identity_scan(const SteinGrid& grid);

struct DgScan {
  std::size_t checked = 0;
  std::size_t uniform_violations = 0;
  std::size_t tail_violations = 0;   // branches other than k = 1 < z
  std::size_t tail_k1_violations = 0;
  std::size_t g_bound_violations = 0;
  double worst_uniform_ratio = 0.0;
  std::string first_uniform;
  std::string first_tail;
  std::string first_tail_k1;
};

/// Grid z values plus `probes` random (k, z) pairs per (alpha, p).
DgScan dg_scan(const SteinGrid& grid, std::size_t probes, std::uint64_t seed, double dg_constant = 2.0);

struct StopLossScan {
  std::size_t pairs = 0;
  std::size_t agreement_failures = 0;
  std::size_t metric_failures = 0;
  double worst_slack_use = 0.0;  // (exact - grid) / (2 / resolution)
  std::string first_failure;
};

StopLossScan stoploss_scan(std::size_t pairs, std::size_t max_support, int resolution, std::uint64_t seed);

struct Violation {
  std::string model;
  std::string what;
};

struct CorpusScan {
  std::size_t models = 0;
  std::size_t checks = 0;
  std::vector<Violation> violations;
};

/// exact d_sl <= every certified bound among `names` (absolute slack 1e-12).
CorpusScan domination_scan(const std::vector<CorpusModel>& corpus, const std::vector<std::string>& names);

/// The general alpha = n bound equals its independent closed form on independent models, and equal-p models
/// give 0 for Corollaries 1 and 2.
CorpusScan specialization_scan(const std::vector<CorpusModel>& corpus, bool include_dependent_identity);

/// Exact tranche loss inside the certified bracket for z* in
/// {0, 0.01, 0.03, 0.05, 0.1} and R in {0, 0.4}.
CorpusScan bracket_scan(const std::vector<CorpusModel>& corpus);

/// alpha p + delta p = E W and alpha p q + delta p q = Var W.
CorpusScan moment_identity_scan(const std::vector<CorpusModel>& corpus);

/// X_i independent of W_i and W_i*, X_{A_i} independent of W_i*.
CorpusScan local_dependence_scan(const std::vector<CorpusModel>& corpus);

/// Monte Carlo estimates within 4 standard errors of the enumerated values
/// on every dependent corpus model, for each seed.
CorpusScan monte_carlo_scan(const std::vector<CorpusModel>& corpus, const std::vector<std::uint64_t>& seeds,
                            std::size_t samples);

enum class CheckStatus { Pass, Fail, KnownFalse };

std::string to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  CorpusLevel level = CorpusLevel::Quick;
  /// Constant in the uniform |dg| bound; anything but 2 is a test mutation.
  double dg_constant = 2.0;
  std::uint64_t seed = 20240607;
};

std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace slb
