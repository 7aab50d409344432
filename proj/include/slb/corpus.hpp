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

#include <string>
#include <vector>

#include "slb/dependence.hpp"

namespace slb {

/// The first n marginals of the built-in 100-name portfolio: twenty names
/// each at 0.06, 0.07, 0.08, 0.09 and 0.10.
std::vector<double> reference_probabilities(std::size_t n);

struct ComparisonRow {
  int n = 0;
  double poisson = 0.0;
  double alpha_n = 0.0;
  double moment = 0.0;
};

/// Published comparison rows for n = 10, 20, ..., 100.
const std::vector<ComparisonRow>& comparison_published();

struct CorpusModel {
  std::string name;
  PortfolioModel model;
};

enum class CorpusLevel { Quick, Full };

/// Independent and latent one-dependent test portfolios. Full adds the
/// n = 12 latent models.
std::vector<CorpusModel> model_corpus(CorpusLevel level);

}  // namespace slb
