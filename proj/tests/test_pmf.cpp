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
#include <random>

#include "doctest.h"
#include "slb/errors.hpp"
#include "slb/pmf.hpp"
#include "test_support.hpp"

using namespace slb;
using doctest::Approx;

namespace {

double total_mass(const IntegerPmf& pmf) {
  double s = 0.0;
  for (double v : pmf.probs()) s += v;
  return s;
}

}  // namespace

TEST_CASE("binomial pmf small cases") {
  auto b1 = binomial_pmf(BinomialParams::make(1, 0.5));
  REQUIRE(b1.size() == 2);
  CHECK(b1.probs()[0] == Approx(0.5).epsilon(1e-15));
  CHECK(b1.probs()[1] == Approx(0.5).epsilon(1e-15));

  auto b2 = binomial_pmf(BinomialParams::make(2, 0.5));
  CHECK(b2.probs()[0] == Approx(0.25).epsilon(1e-15));
  CHECK(b2.probs()[1] == Approx(0.5).epsilon(1e-15));
  CHECK(b2.probs()[2] == Approx(0.25).epsilon(1e-15));

  double direct = 1.0;
  for (int i = 0; i < 10; ++i) direct *= 0.94;
  auto b10 = binomial_pmf(BinomialParams::make(10, 0.06));
  CHECK(std::abs(b10.probs()[0] - direct) < 1e-14);
  CHECK(b10.probs()[0] == Approx(0.538615).epsilon(1e-6));
}

TEST_CASE("binomial pmf stays normalized for large alpha") {
  for (long long alpha : {50LL, 500LL, 5000LL, 10000LL}) {
    for (double p : {0.001, 0.06, 0.5, 0.93}) {
      auto b = binomial_pmf(BinomialParams::make(alpha, p));
      CHECK(std::abs(total_mass(b) - 1.0) < 1e-12);
      auto [m, v] = mean_variance(b);
      CHECK(m == Approx(alpha * p).epsilon(1e-10));
      CHECK(v == Approx(alpha * p * (1 - p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("binomial params validation") {
  CHECK_THROWS_AS(BinomialParams::make(0, 0.5), DomainError);
  CHECK_THROWS_AS(BinomialParams::make(3, 0.0), DomainError);
  CHECK_THROWS_AS(BinomialParams::make(3, 1.0), DomainError);
  CHECK_THROWS_AS(BinomialParams::make(3, 0.5, 1.0), DomainError);
  auto bp = BinomialParams::make(3, 0.3, 0.25);
  CHECK(bp.q == 1.0 - 0.3);
}

TEST_CASE("IntegerPmf rejects invalid tables") {
  CHECK_THROWS_AS(IntegerPmf({}), DomainError);
  CHECK_THROWS_AS(IntegerPmf({0.5, -0.1, 0.6}), DomainError);
  CHECK_THROWS_AS(IntegerPmf({0.5, 0.4}), DomainError);
  CHECK_NOTHROW(IntegerPmf({0.5, 0.5, 0.0, 0.0}));
  IntegerPmf p({0.25, 0.75});
  CHECK(p.at(-1) == 0.0);
  CHECK(p.at(5) == 0.0);
}

TEST_CASE("poisson-binomial pmf") {
  const std::vector<double> halves{0.5, 0.5};
  auto pb = poisson_binomial_pmf(halves);
  CHECK(pb.probs()[0] == Approx(0.25).epsilon(1e-15));
  CHECK(pb.probs()[1] == Approx(0.5).epsilon(1e-15));
  CHECK(pb.probs()[2] == Approx(0.25).epsilon(1e-15));

  auto empty = poisson_binomial_pmf({});
  REQUIRE(empty.size() == 1);
  CHECK(empty.probs()[0] == 1.0);

  SUBCASE("equal probabilities reproduce the binomial") {
    for (int n : {1, 7, 30, 200}) {
      for (double p : {0.02, 0.3, 0.77}) {
        auto pb_eq = poisson_binomial_pmf(std::vector<double>(n, p));
        auto b = binomial_pmf(BinomialParams::make(n, p));
        REQUIRE(pb_eq.size() == b.size());
        for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(pb_eq.probs()[k] - b.probs()[k]) < 1e-12);
      }
    }
  }

  SUBCASE("reference prefix has mean 1.9") {
    auto pb30 = poisson_binomial_pmf(slb::testing::reference_prefix(30));
    CHECK(mean_variance(pb30).first == Approx(1.9).epsilon(1e-13));
  }

  SUBCASE("normalization for a few thousand indicators") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    std::vector<double> p(3000);
    for (auto& v : p) v = u(rng);
    auto big = poisson_binomial_pmf(p);
    CHECK(std::abs(total_mass(big) - 1.0) < 1e-13);
  }

  CHECK_THROWS_AS(poisson_binomial_pmf(std::vector<double>{0.2, 1.0}), DomainError);
}

TEST_CASE("truncated poisson") {
  auto tiny = poisson_pmf_truncated(1e-12, 1e-12);
  CHECK(tiny.probs()[0] == Approx(1.0).epsilon(1e-11));

  auto p06 = poisson_pmf_truncated(0.6, 1e-15);
  CHECK(p06.probs()[0] == Approx(std::exp(-0.6)).epsilon(1e-14));
  CHECK(p06.probs()[0] == Approx(0.548812).epsilon(1e-6));
  CHECK(p06.dropped_tail() < 1e-15);

  auto p19 = poisson_pmf_truncated(1.9, 1e-15);
  CHECK(std::abs(mean_variance(p19).first - 1.9) < 1e-10);

  auto p50 = poisson_pmf_truncated(50.0, 1e-13);
  CHECK(p50.dropped_tail() < 1e-13);
  CHECK(std::abs(mean_variance(p50).first - 50.0) < 1e-9);

  CHECK_THROWS_AS(poisson_pmf_truncated(0.0, 1e-9), DomainError);
  CHECK_THROWS_AS(poisson_pmf_truncated(1.0, 1.0), DomainError);
}

TEST_CASE("call expectation") {
  auto b2 = binomial_pmf(BinomialParams::make(2, 0.5));
  CHECK(call_expectation(b2, 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(call_expectation(b2, 1.0) == Approx(0.25).epsilon(1e-15));
  CHECK(call_expectation(b2, 2.0) == 0.0);
  CHECK(call_expectation(b2, 7.5) == 0.0);
  CHECK(call_expectation(b2, -1.5) == Approx(2.5).epsilon(1e-15));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto pmf = slb::testing::random_pmf(rng, 1 + trial % 40);
    CHECK(call_expectation(pmf, 0.0) == Approx(mean_variance(pmf).first).epsilon(1e-14));
    CHECK(call_expectation(pmf, static_cast<double>(pmf.max_support())) == 0.0);
    const double h = 0.25;
    double prev2 = call_expectation(pmf, -1.0), prev1 = call_expectation(pmf, -1.0 + h);
    CHECK(prev1 <= prev2 + 1e-15);
    for (double z = -1.0 + 2 * h; z <= static_cast<double>(pmf.size()) + 1; z += h) {
      const double cur = call_expectation(pmf, z);
      CHECK(std::abs(cur - slb::testing::naive_call(pmf, z)) < 1e-13);
      CHECK(cur <= prev1 + 1e-15);
      CHECK(cur - 2 * prev1 + prev2 >= -1e-12);
      prev2 = prev1;
      prev1 = cur;
    }
  }
}

TEST_CASE("call of a binomial never exceeds its mean for z >= 0") {
  for (long long alpha : {1LL, 5LL, 20LL, 60LL}) {
    for (double p : {0.05, 0.4, 0.9}) {
      auto b = binomial_pmf(BinomialParams::make(alpha, p));
      for (double z = 0.0; z <= alpha + 1.0; z += 0.3) {
        CHECK(call_expectation(b, z) <= alpha * p * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("shift total variation") {
  CHECK(dtv_shift(IntegerPmf::point_mass(0)) == 1.0);
  CHECK(dtv_shift(IntegerPmf::point_mass(4)) == 1.0);
  CHECK(dtv_shift(binomial_pmf(BinomialParams::make(2, 0.5))) == Approx(0.5).epsilon(1e-15));
  for (int m : {0, 1, 4, 19}) {
    IntegerPmf uni(std::vector<double>(m + 1, 1.0 / (m + 1)));
    CHECK(dtv_shift(uni) == Approx(1.0 / (m + 1)).epsilon(1e-14));
  }
  for (long long alpha : {1LL, 3LL, 40LL}) {
    for (double p : {0.01, 0.5, 0.99}) {
      const double d = dtv_shift(binomial_pmf(BinomialParams::make(alpha, p)));
      CHECK(d >= 0.0);
      CHECK(d < 1.0);
    }
  }
}

TEST_CASE("mean and variance") {
  auto b = binomial_pmf(BinomialParams::make(17, 0.3));
  auto [m, v] = mean_variance(b);
  CHECK(m == Approx(17 * 0.3).epsilon(1e-12));
  CHECK(v == Approx(17 * 0.3 * 0.7).epsilon(1e-12));

  auto [m0, v0] = mean_variance(IntegerPmf::point_mass(3));
  CHECK(m0 == 3.0);
  CHECK(v0 == 0.0);

  auto pb = poisson_binomial_pmf(std::vector<double>(10, 0.06));
  auto [mp, vp] = mean_variance(pb);
  CHECK(mp == Approx(0.6).epsilon(1e-13));
  CHECK(vp == Approx(0.564).epsilon(1e-13));
}
