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

#include "slb/corpus.hpp"

#include <sstream>
#include <string>
#include <utility>

#include "slb/rng.hpp"

namespace slb {

std::vector<double> reference_probabilities(std::size_t n) {
  static constexpr double kBlock[] = {0.06, 0.07, 0.08, 0.09, 0.10};
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = kBlock[(i / 20) % 5];
  return p;
}

const std::vector<ComparisonRow>& comparison_published() {
  static const std::vector<ComparisonRow> rows{
      {10, 0.095193, 0.0, 7.6e-16},       {20, 0.406097, 0.0, 6.8e-15},
      {30, 1.496990, 0.109842, 0.638717}, {40, 4.407670, 0.324195, 1.188300},
      {50, 13.78920, 1.186000, 1.474570}, {60, 39.44710, 3.261280, 1.676520},
      {70, 123.9500, 12.78810, 12.56050}, {80, 370.6940, 39.29820, 13.90400},
      {90, 1227.670, 136.3000, 68.75740}, {100, 3934.200, 425.1760, 335.1310},
  };
  return rows;
}

namespace {

std::string label(const char* kind, std::size_t n, const char* extra, double v) {
  std::ostringstream os;
  os << kind << "-n" << n << extra << v;
  return os.str();
}

}  // namespace

std::vector<CorpusModel> model_corpus(CorpusLevel level) {
  std::vector<CorpusModel> out;
  for (std::size_t n = 10; n <= 100; n += 10) {
    out.push_back({"reference-n" + std::to_string(n), PortfolioModel::independent(reference_probabilities(n))});
  }
  for (auto [n, p] : {std::pair<std::size_t, double>{10, 0.06}, {25, 0.3}, {50, 0.1}}) {
    out.push_back({label("equal", n, "-p", p), PortfolioModel::independent(std::vector<double>(n, p))});
  }
  CounterStream rng(0x5eed, 0, 0);
  for (int k = 0; k < 8; ++k) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 56);
    std::vector<double> p(n);
    for (auto& v : p) v = 0.01 + 0.29 * rng.uniform();
    out.push_back({label("random", n, "-k", k), PortfolioModel::independent(std::move(p))});
  }
  struct Latent {
    std::size_t n;
    double theta;
    int pattern;
  };
  std::vector<Latent> latent{{4, 0.5, 0},  {6, 0.2, 1}, {6, 0.8, 2}, {8, 0.5, 1},  {8, 0.3, 0},
                             {8, 0.7, 2},  {9, 0.5, 2}, {10, 0.4, 0}, {10, 0.6, 1}, {10, 0.9, 2}};
  if (level == CorpusLevel::Full) {
    latent.push_back({12, 0.5, 0});
    latent.push_back({12, 0.25, 1});
    latent.push_back({12, 0.75, 2});
  }
  for (const auto& l : latent) {
    std::vector<double> p(l.n);
    for (std::size_t i = 0; i < l.n; ++i) {
      switch (l.pattern) {
        case 0:
          p[i] = reference_probabilities(100)[i * 100 / l.n];
          break;
        case 1:
          p[i] = 0.02 + 0.03 * static_cast<double>(i % 4);
          break;
        default:
          p[i] = 0.15 + 0.1 * static_cast<double>(i % 3);
          break;
      }
    }
    std::ostringstream os;
    os << "latent-n" << l.n << "-theta" << l.theta << "-pattern" << l.pattern;
    out.push_back({os.str(), PortfolioModel::latent_one_dependent(std::move(p), l.theta)});
  }
  return out;
}

}  // namespace slb
