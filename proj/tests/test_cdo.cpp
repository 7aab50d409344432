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

#include <cmath>

#include "doctest.h"
#include "slb/cdo.hpp"
#include "slb/corpus.hpp"
#include "slb/errors.hpp"
#include "slb/stoploss.hpp"
#include "test_support.hpp"

using namespace slb;
using doctest::Approx;

TEST_CASE("z from z*") {
  CHECK(z_from_zstar({0.4, 0.03, ""}, 100) == Approx(5.0).epsilon(1e-14));
  CHECK(z_from_zstar({0.7, 0.0, ""}, 37) == 0.0);
  for (int k = 0; k <= 10; ++k) CHECK(z_from_zstar({0.0, k / 10.0, ""}, 10) == Approx(k).epsilon(1e-14));
  CHECK_THROWS_AS(z_from_zstar({1.0, 0.1, ""}, 10), DomainError);
  CHECK_THROWS_AS(z_from_zstar({0.4, -0.1, ""}, 10), DomainError);
  CHECK_THROWS_AS(z_from_zstar({-0.1, 0.1, ""}, 10), DomainError);
}

TEST_CASE("exact tranche loss") {
  auto m = PortfolioModel::independent(std::vector<double>(10, 0.06));
  SUBCASE("z* = 0 gives the scaled mean") {
    CHECK(tranche_expected_loss_exact(m, {0.4, 0.0, ""}) == Approx(0.06 * 0.6).epsilon(1e-14));
  }
  SUBCASE("z at or beyond n gives 0") {
    CHECK(tranche_expected_loss_exact(m, {0.0, 1.0, ""}) == 0.0);
    CHECK(tranche_expected_loss_exact(m, {0.4, 0.7, ""}) == 0.0);
  }
  SUBCASE("z = 1 against a direct sum") {
    const auto law = poisson_binomial_pmf(std::vector<double>(10, 0.06));
    CHECK(tranche_expected_loss_exact(m, {0.4, 0.06, ""}) ==
          Approx(0.06 * slb::testing::naive_call(law, 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("exact tranche loss is non-increasing and convex in z*") {
  auto m = PortfolioModel::latent_one_dependent({0.05, 0.1, 0.15, 0.05, 0.1, 0.15, 0.05, 0.1}, 0.6);
  std::vector<double> v;
  for (int i = 0; i <= 60; ++i) v.push_back(tranche_expected_loss_exact(m, {0.4, i * 0.005, ""}));
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] <= v[i - 1] + 1e-15);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] >= -1e-12);
}

TEST_CASE("scaling R and z* together keeps the call unchanged") {
  const auto law = poisson_binomial_pmf(slb::testing::reference_prefix(40));
  const TrancheSpec a{0.0, 0.05, ""};
  const TrancheSpec b{0.5, 0.025, ""};
  CHECK(z_from_zstar(a, 40) == Approx(z_from_zstar(b, 40)).epsilon(1e-14));
  CHECK(tranche_expected_loss(law, b, 40) == Approx(0.5 * tranche_expected_loss(law, a, 40)).epsilon(1e-14));
}

TEST_CASE("bracket on the reference portfolio") {
  auto m = PortfolioModel::independent(slb::testing::reference_prefix(30));
  const auto report = compile_report(m);
  REQUIRE(report.best_name == "indep_alpha_n");
  const TrancheSpec spec{0.4, 0.03, ""};
  const auto b = tranche_expected_loss_bracketed(30, spec, report);
  CHECK(b.certified);
  CHECK(b.half_width == Approx(0.6 / 30 * 0.109842).epsilon(1e-5));
  const double exact = tranche_expected_loss_exact(m, spec);
  CHECK(exact >= b.lower());
  CHECK(exact <= b.upper());
}

TEST_CASE("bracket z* = 0 uses the binomial mean") {
  auto m = PortfolioModel::independent(slb::testing::reference_prefix(30));
  const auto report = compile_report(m);
  const auto b = tranche_expected_loss_bracketed(30, {0.4, 0.0, ""}, report);
  const auto& bp = b.params;
  CHECK(b.approx == Approx(0.6 / 30 * (static_cast<double>(bp.alpha) + bp.delta) * bp.p).epsilon(1e-12));
  CHECK(b.approx == Approx(tranche_expected_loss_exact(m, {0.4, 0.0, ""})).epsilon(1e-12));
}

TEST_CASE("equal p bracket has zero width") {
  auto m = PortfolioModel::independent(std::vector<double>(25, 0.05));
  const auto report = compile_report(m);
  for (double zs : {0.0, 0.02, 0.08}) {
    const TrancheSpec spec{0.4, zs, ""};
    const auto b = tranche_expected_loss_bracketed(25, spec, report);
    CHECK(b.half_width == 0.0);
    CHECK(b.approx == Approx(tranche_expected_loss_exact(m, spec)).epsilon(1e-12));
  }
}

TEST_CASE("latent n = 8 bracket contains the exact value") {
  auto m = PortfolioModel::latent_one_dependent({0.15, 0.25, 0.35, 0.15, 0.25, 0.35, 0.15, 0.25}, 0.7);
  const auto report = compile_report(m);
  CHECK(report.best_certified);
  for (double zs : {0.0, 0.01, 0.03, 0.05, 0.1}) {
    const TrancheSpec spec{0.4, zs, ""};
    const auto b = tranche_expected_loss_bracketed(8, spec, report);
    const double exact = tranche_expected_loss_exact(m, spec);
    CHECK(exact >= b.lower() - 1e-12);
    CHECK(exact <= b.upper() + 1e-12);
  }
}

TEST_CASE("Monte Carlo brackets are flagged and widened") {
  auto m = PortfolioModel::latent_one_dependent({0.15, 0.25, 0.35, 0.15, 0.25, 0.35, 0.15, 0.25}, 0.7);
  BoundOptions opt;
  opt.force_monte_carlo = true;
  const auto report = compile_report(m, opt);
  CHECK_FALSE(report.best_certified);
  const auto b = tranche_expected_loss_bracketed(8, {0.4, 0.03, ""}, report);
  CHECK_FALSE(b.certified);
  CHECK(b.half_width == Approx(0.6 / 8 * (report.best_value + 4 * report.best_se)).epsilon(1e-14));
}

TEST_CASE("bracket needs a binomial bound") {
  BoundReport empty;
  CHECK_THROWS_AS(tranche_expected_loss_bracketed(10, {0.4, 0.0, ""}, empty), ApplicabilityError);
}

TEST_CASE("non-enumerable dependent model has no exact tranche loss") {
  auto m = PortfolioModel::latent_one_dependent(std::vector<double>(40, 0.05), 0.3);
  CHECK_THROWS_AS(tranche_expected_loss_exact(m, {0.4, 0.0, ""}), SizeError);
}
