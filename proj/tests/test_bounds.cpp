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
#include "slb/bounds.hpp"
#include "slb/corpus.hpp"
#include "slb/errors.hpp"
#include "slb/stoploss.hpp"
#include "test_support.hpp"

using namespace slb;
using doctest::Approx;

namespace {

PortfolioModel reference(std::size_t n) { return PortfolioModel::independent(slb::testing::reference_prefix(n)); }

PortfolioModel equal_p(std::size_t n, double p) { return PortfolioModel::independent(std::vector<double>(n, p)); }

PortfolioModel underdispersed6() { return PortfolioModel::latent_one_dependent(std::vector<double>(6, 0.1), 0.9); }

PortfolioModel overdispersed8() {
  return PortfolioModel::latent_one_dependent({0.02, 0.05, 0.08, 0.11, 0.02, 0.05, 0.08, 0.11}, 0.5);
}

double dsl(const PortfolioModel& m, const BinomialParams& bp) {
  return stoploss_distance_exact(exact_loss_pmf(m), binomial_pmf(bp)).sup_abs;
}

}  // namespace

TEST_CASE("alpha = n fit") {
  auto a = fit_alpha_n(reference(30));
  CHECK(a.alpha == 30);
  CHECK(a.p == Approx(1.9 / 30).epsilon(1e-14));
  CHECK(a.delta == 0.0);
  auto b = fit_alpha_n(equal_p(10, 0.06));
  CHECK(b.alpha == 10);
  CHECK(b.p == Approx(0.06).epsilon(1e-14));
}

TEST_CASE("moment fit") {
  SUBCASE("ten at 0.06 snaps to alpha = 10") {
    auto bp = fit_moment_matching(equal_p(10, 0.06));
    CHECK(bp.alpha == 10);
    CHECK(bp.p == Approx(0.06).epsilon(1e-12));
    CHECK(bp.delta < 1e-9);
  }
  SUBCASE("reference prefix matches both moments") {
    auto m = reference(30);
    auto bp = fit_moment_matching(m);
    const auto mom = loss_moments(m);
    const double a = static_cast<double>(bp.alpha);
    CHECK(std::abs((a + bp.delta) * bp.p - 1.9) < 1e-12);
    CHECK(std::abs((a + bp.delta) * bp.p * bp.q - mom.variance) < 1e-10);
    CHECK(bp.delta >= 0.0);
    CHECK(bp.delta < 1.0);
  }
  SUBCASE("overdispersion is a fit error") {
    auto m = overdispersed8();
    CHECK(loss_moments(m).variance > loss_moments(m).mean);
    CHECK_THROWS_AS(fit_moment_matching(m), FitError);
  }
  SUBCASE("degenerate mean") {
    CHECK_THROWS_AS(fit_moment_matching(LossMoments{0.0, 0.0}), FitError);
  }
}

TEST_CASE("chosen p fit") {
  auto bp = fit_chosen_p(reference(10), 0.1);
  CHECK(bp.alpha == 6);
  CHECK(bp.delta == 0.0);
  CHECK_THROWS_AS(fit_chosen_p(reference(10), 0.9), FitError);
  CHECK_THROWS_AS(fit_chosen_p(reference(10), 1.0), DomainError);
}

TEST_CASE("independent closed forms on the reference portfolio") {
  CHECK(bound_independent_alpha_n(reference(10), fit_alpha_n(reference(10))) == 0.0);
  CHECK(bound_independent_alpha_n(reference(30), fit_alpha_n(reference(30))) == Approx(0.109842).epsilon(1e-5));
  CHECK(bound_independent_alpha_n(reference(100), fit_alpha_n(reference(100))) == Approx(425.176).epsilon(1e-5));
  CHECK(bound_poisson_existing(reference(10)) == Approx(0.095193).epsilon(1e-5));
  CHECK(bound_poisson_existing(reference(50)) == Approx(13.7892).epsilon(1e-5));
  CHECK(bound_poisson_existing(reference(100)) == Approx(3934.20).epsilon(1e-5));
  CHECK(bound_independent_moment(reference(30), fit_moment_matching(reference(30))) ==
        Approx(0.638717).epsilon(5e-3));
  CHECK(bound_independent_moment(reference(100), fit_moment_matching(reference(100))) ==
        Approx(335.131).epsilon(5e-3));
  CHECK(std::abs(bound_independent_moment(reference(10), fit_moment_matching(reference(10)))) <= 1e-12);
}

TEST_CASE("independent closed forms reject dependent models") {
  auto m = overdispersed8();
  CHECK_THROWS_AS(bound_independent_alpha_n(m, fit_alpha_n(m)), ApplicabilityError);
  CHECK_THROWS_AS(bound_independent_moment(m, fit_alpha_n(m)), ApplicabilityError);
}

TEST_CASE("equal p gives zero for the moment family") {
  auto m = equal_p(20, 0.07);
  const auto terms = enumerate_terms(m);
  const auto bp = fit_moment_matching(m);
  CHECK(bound_independent_alpha_n(m, fit_alpha_n(m)) == 0.0);
  CHECK(bound_independent_moment(m, bp) <= 1e-12);
  CHECK(bound_dependent_moment(bp, terms).value <= 1e-12);
  CHECK(bound_dependent_moment_star(bp, terms).value <= 1e-12);
}

TEST_CASE("every exact bound dominates the exact distance") {
  for (const auto& m : {reference(30), underdispersed6(), equal_p(12, 0.2)}) {
    const auto terms = enumerate_terms(m);
    const auto an = fit_alpha_n(m);
    CHECK(bound_dependent_alpha_n(an, terms).value >= dsl(m, an) - 1e-12);
    const auto mm = fit_moment_matching(m);
    CHECK(bound_dependent_moment(mm, terms).value >= dsl(m, mm) - 1e-12);
    CHECK(bound_dependent_moment_star(mm, terms).value >= dsl(m, mm) - 1e-12);
    const auto cp = fit_chosen_p(m, an.p);
    CHECK(bound_dependent_chosen_p(cp, terms).value >= dsl(m, cp) - 1e-12);
  }
}

TEST_CASE("chosen p at the mean probability reduces to the alpha = n fit") {
  auto m = overdispersed8();
  const auto an = fit_alpha_n(m);
  const auto cp = fit_chosen_p(m, an.p);
  CHECK(cp.alpha == an.alpha);
  CHECK(cp.delta == 0.0);
}

TEST_CASE("report on the reference portfolio") {
  for (auto [n, poisson] : {std::pair{10, 0.095193}, std::pair{20, 0.406097}}) {
    const auto r = compile_report(reference(n));
    REQUIRE(r.find("poisson"));
    CHECK(r.find("poisson")->value == Approx(poisson).epsilon(1e-5));
    CHECK(r.find("indep_alpha_n")->value == 0.0);
    CHECK(std::abs(r.find("indep_moment")->value) <= 1e-12);
    CHECK(r.best_value <= 1e-12);
    CHECK(r.best_certified);
  }
  const auto r30 = compile_report(reference(30));
  CHECK(r30.find("indep_alpha_n")->value == Approx(0.109842).epsilon(1e-5));
  REQUIRE(r30.exact_dsl);
  CHECK(*r30.exact_dsl <= r30.best_value);
}

TEST_CASE("report entries") {
  const auto r = compile_report(overdispersed8());
  REQUIRE(r.entries.size() == bound_names().size());
  for (std::size_t i = 0; i < r.entries.size(); ++i) CHECK(r.entries[i].name == bound_names()[i]);
  CHECK_FALSE(r.find("indep_alpha_n")->applicable);
  CHECK_FALSE(r.find("indep_moment")->applicable);
  REQUIRE(r.exact_dsl);
  for (const auto& e : r.entries) {
    if (!e.applicable) continue;
    CHECK(e.value >= 0.0);
    REQUIRE(e.exact_dsl);
    if (e.certified()) CHECK(*e.exact_dsl <= e.value + 1e-12);
  }
  CHECK(r.best_value <= r.find("dep_alpha_n")->value);
  CHECK(r.terms_mode == IngredientMode::Exact);
}

TEST_CASE("report on an overdispersed model keeps the alpha = n family") {
  const auto r = compile_report(overdispersed8());
  CHECK_FALSE(r.find("dep_moment")->applicable);
  CHECK_FALSE(r.find("dep_moment_star")->applicable);
  CHECK(r.find("dep_alpha_n")->applicable);
  CHECK_FALSE(r.errors.empty());
  CHECK(r.best_name == "dep_alpha_n");
}

TEST_CASE("negative raw values are never certified") {
  const auto corpus = model_corpus(CorpusLevel::Quick);
  bool seen = false;
  for (const auto& cm : corpus) {
    const auto r = compile_report(cm.model);
    for (const auto& e : r.entries) {
      if (!e.failed()) continue;
      seen = true;
      CHECK_FALSE(e.certified());
      CHECK(e.value == 0.0);
      CHECK(r.best_name != e.name);
    }
  }
  CHECK(seen);
}

TEST_CASE("Monte Carlo ingredients are labeled estimated") {
  BoundOptions opt;
  opt.force_monte_carlo = true;
  opt.mc_samples = 5000;
  const auto r = compile_report(overdispersed8(), opt);
  CHECK(r.terms_mode == IngredientMode::MonteCarlo);
  const auto* e = r.find("dep_alpha_n");
  CHECK(e->mode == IngredientMode::MonteCarlo);
  CHECK_FALSE(e->certified());
  CHECK(e->se > 0.0);
  CHECK(r.find("poisson")->certified());
  // Monte Carlo output depends on the seed only
  const auto again = compile_report(overdispersed8(), opt);
  CHECK(again.find("dep_alpha_n")->value == e->value);
}

TEST_CASE("large latent models fall back to sampling") {
  std::vector<double> p(30, 0.05);
  auto m = PortfolioModel::latent_one_dependent(p, 0.3);
  BoundOptions opt;
  opt.mc_samples = 2000;
  const auto r = compile_report(m, opt);
  CHECK(r.terms_mode == IngredientMode::MonteCarlo);
  CHECK_FALSE(r.exact_dsl);
  CHECK_FALSE(r.best_certified);
  CHECK(r.find("dep_alpha_n")->applicable);
}

TEST_CASE("independent bound columns grow with n on the reference portfolio") {
  double prev[3] = {0, 0, 0};
  for (std::size_t n = 10; n <= 100; n += 10) {
    const auto m = reference(n);
    const double cur[3] = {bound_poisson_existing(m), bound_independent_alpha_n(m, fit_alpha_n(m)),
                           bound_independent_moment(m, fit_moment_matching(m))};
    for (int c = 0; c < 3; ++c) {
      CHECK(cur[c] >= prev[c] - 1e-12);
      prev[c] = cur[c];
    }
  }
}

TEST_CASE("moments from local terms agree with the exact moments") {
  for (const auto& m : {overdispersed8(), reference(20)}) {
    const auto exact = loss_moments(m);
    const auto local = moments_from_terms(enumerate_terms(m), m.neighborhoods());
    CHECK(local.mean == Approx(exact.mean).epsilon(1e-12));
    CHECK(local.variance == Approx(exact.variance).epsilon(1e-10));
  }
}
