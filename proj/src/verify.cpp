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

#include "slb/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "slb/bounds.hpp"
#include "slb/cdo.hpp"
#include "slb/errors.hpp"
#include "slb/numeric.hpp"
#include "slb/rng.hpp"
#include "slb/stein.hpp"
#include "slb/stoploss.hpp"

namespace slb {

namespace {

constexpr double kSlack = 1e-12;

std::string describe(long long alpha, double p, long long k, double z, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(6);
  os << "alpha=" << alpha << " p=" << p << " k=" << k << " z=" << z << ": |dg|=" << lhs << " > " << rhs;
  return os.str();
}

IntegerPmf random_pmf(CounterStream& rng, std::size_t support) {
  std::vector<double> v(support + 1);
  double total = 0.0;
  for (auto& x : v) {
    x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    total += x;
  }
  if (total == 0.0) {
    v[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : v) x /= total;
  return IntegerPmf(std::move(v));
}

bool enumerable(const PortfolioModel& m) {
  return m.kind() == LawKind::Independent || m.n() <= static_cast<std::size_t>(EnumerationLimits{}.max_latent_n);
}

}  // namespace

SteinGrid stein_grid(CorpusLevel level) {
  SteinGrid g{{1, 2, 5, 10, 25, 50}, {0.01, 0.05, 0.1, 0.3, 0.5, 0.7}};
  if (level == CorpusLevel::Full) {
    g.alphas.push_back(100);
    g.alphas.push_back(200);
    g.ps.push_back(0.9);
  }
  return g;
}

std::vector<double> stein_z_values(long long alpha) {
  const double a = static_cast<double>(alpha);
  return {0.0, 0.5, 1.0, 1.5, 2.0, 3.7, a / 2, a - 0.5, a, a + 3};
}

SteinStats stein_identity_scan(const SteinGrid& grid) {
  SteinStats out;
  for (long long alpha : grid.alphas) {
    for (double p : grid.ps) {
      const auto bp = BinomialParams::make(alpha, p);
      const auto pmf = binomial_pmf(bp);
      for (double z : stein_z_values(alpha)) {
        if (z < 0.0) continue;
        SteinContext ctx(bp, z);
        const auto table = stein_table(ctx);
        auto g = [&](long long k) { return table[static_cast<std::size_t>(k)]; };
        CompensatedSum mean;
        for (long long k = 0; k <= alpha; ++k) {
          const double a = stein_operator(ctx, g, k);
          const double target = std::max(static_cast<double>(k) - z, 0.0) - ctx.call_ref();
          // at k = alpha the equation needs g(alpha + 1), which is 0 by convention
          if (k < alpha) out.max_residual = std::max(out.max_residual, std::abs(a - target));
          mean.add(pmf.probs()[static_cast<std::size_t>(k)] * a);
        }
        out.max_mean = std::max(out.max_mean, std::abs(mean.value()));
        ++out.cases;
      }
    }
  }
  return out;
}

DgScan dg_scan(const SteinGrid& grid, std::size_t probes, std::uint64_t seed, double dg_constant) {
  DgScan out;
  std::uint64_t pair_index = 0;
  for (long long alpha : grid.alphas) {
    for (double p : grid.ps) {
      const auto bp = BinomialParams::make(alpha, p);
      auto check_z = [&](double z, const std::function<bool(long long)>& use_k) {
        SteinContext ctx(bp, z);
        const auto t = stein_table(ctx);
        for (long long k = 0; k <= alpha; ++k) {
          if (!use_k(k)) continue;
          const double d = std::abs(t[static_cast<std::size_t>(k + 1)] - t[static_cast<std::size_t>(k)]);
          ++out.checked;
          const double b1 = dg_uniform_bound_scaled(bp, k, dg_constant);
          out.worst_uniform_ratio = std::max(out.worst_uniform_ratio, d / b1);
          if (d > b1 * (1 + kSlack)) {
            if (out.uniform_violations++ == 0) out.first_uniform = describe(alpha, p, k, z, d, b1);
          }
          if (k >= 1 && std::abs(t[static_cast<std::size_t>(k)]) > g_bound(bp, k) * (1 + kSlack)) {
            ++out.g_bound_violations;
          }
          if (z > 1.0 && k >= 1) {
            const double b2 = dg_tail_bound(bp, k, z);
            if (d > b2 * (1 + kSlack)) {
              if (dg_tail_k1_refuted(k, z)) {
                if (out.tail_k1_violations++ == 0) out.first_tail_k1 = describe(alpha, p, k, z, d, b2);
              } else if (out.tail_violations++ == 0) {
                out.first_tail = describe(alpha, p, k, z, d, b2);
              }
            }
          }
        }
      };
      for (double z : stein_z_values(alpha)) {
        if (z >= 0.0) check_z(z, [](long long) { return true; });
      }
      CounterStream rng(seed, pair_index++, 7);
      for (std::size_t r = 0; r < probes; ++r) {
        const double z = rng.uniform() * (static_cast<double>(alpha) + 3.0);
        const auto k = std::min<long long>(alpha, static_cast<long long>(rng.uniform() * static_cast<double>(alpha + 1)));
        check_z(z, [k](long long j) { return j == k; });
      }
    }
  }
  return out;
}

StopLossScan stoploss_scan(std::size_t pairs, std::size_t max_support, int resolution, std::uint64_t seed) {
  StopLossScan out;
  for (std::size_t i = 0; i < pairs; ++i) {
    CounterStream rng(seed, i, 11);
    auto support = [&] { return 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_support)); };
    const auto x = random_pmf(rng, support());
    const auto y = random_pmf(rng, support());
    const auto w = random_pmf(rng, support());
    const double exact = stoploss_distance_exact(x, y).sup_abs;
    const double grid = stoploss_distance_grid_check(x, y, resolution);
    const double slack = 2.0 / resolution;
    out.worst_slack_use = std::max(out.worst_slack_use, (exact - grid) / slack);
    ++out.pairs;
    if (grid > exact + kSlack || exact - grid > slack + kSlack) {
      if (out.agreement_failures++ == 0) {
        std::ostringstream os;
        os << "pair " << i << ": exact " << exact << " grid " << grid;
        out.first_failure = os.str();
      }
    }
    const double yx = stoploss_distance_exact(y, x).sup_abs;
    const double xw = stoploss_distance_exact(x, w).sup_abs;
    const double wy = stoploss_distance_exact(w, y).sup_abs;
    const double gap = std::abs(mean_variance(x).first - mean_variance(y).first);
    if (std::abs(exact - yx) > kSlack || exact > xw + wy + kSlack || exact < gap - kSlack) ++out.metric_failures;
  }
  return out;
}

CorpusScan domination_scan(const std::vector<CorpusModel>& corpus, const std::vector<std::string>& names) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    if (!enumerable(cm.model)) continue;
    ++out.models;
    const auto report = compile_report(cm.model);
    for (const auto& name : names) {
      const auto* e = report.find(name);
      if (!e || !e->applicable || e->mode == IngredientMode::MonteCarlo || !e->exact_dsl) continue;
      ++out.checks;
      if (*e->exact_dsl > e->value + kSlack) {
        std::ostringstream os;
        os << name << ": bound " << e->value;
        if (e->clamped) os << " (raw " << e->raw << ")";
        os << " < exact d_sl " << *e->exact_dsl;
        out.violations.push_back({cm.name, os.str()});
      }
    }
  }
  return out;
}

CorpusScan specialization_scan(const std::vector<CorpusModel>& corpus, bool include_dependent_identity) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    if (cm.model.kind() != LawKind::Independent) continue;
    ++out.models;
    const auto p = cm.model.p_list();
    const bool equal = std::all_of(p.begin(), p.end(), [&](double v) { return v == p[0]; });
    const auto an = fit_alpha_n(cm.model);
    const double c1 = bound_independent_alpha_n(cm.model, an);
    if (include_dependent_identity) {
      const double t1 = bound_dependent_alpha_n(an, enumerate_terms(cm.model)).value;
      ++out.checks;
      if (std::abs(t1 - c1) > 1e-9) {
        std::ostringstream os;
        os << "dep_alpha_n " << t1 << " != indep_alpha_n " << c1;
        out.violations.push_back({cm.name, os.str()});
      }
    }
    if (equal) {
      const double c2 = bound_independent_moment(cm.model, fit_moment_matching(cm.model));
      out.checks += 2;
      if (c1 != 0.0 || c2 > kSlack) {
        std::ostringstream os;
        os << "equal p: indep_alpha_n " << c1 << ", indep_moment " << c2;
        out.violations.push_back({cm.name, os.str()});
      }
    }
  }
  return out;
}

CorpusScan bracket_scan(const std::vector<CorpusModel>& corpus) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    if (!enumerable(cm.model)) continue;
    ++out.models;
    const auto report = compile_report(cm.model);
    const auto law = exact_loss_pmf(cm.model);
    for (double r : {0.0, 0.4}) {
      for (double zs : {0.0, 0.01, 0.03, 0.05, 0.1}) {
        const TrancheSpec spec{r, zs, ""};
        const double exact = tranche_expected_loss(law, spec, cm.model.n());
        const auto b = tranche_expected_loss_bracketed(cm.model.n(), spec, report);
        ++out.checks;
        if (!b.certified || exact < b.lower() - kSlack || exact > b.upper() + kSlack) {
          std::ostringstream os;
          os << "R=" << r << " z*=" << zs << ": exact " << exact << " outside [" << b.lower() << ", " << b.upper()
             << "] (" << b.bound_name << (b.certified ? "" : ", not certified") << ")";
          out.violations.push_back({cm.name, os.str()});
        }
      }
    }
  }
  return out;
}

CorpusScan moment_identity_scan(const std::vector<CorpusModel>& corpus) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    const auto m = loss_moments(cm.model);
    BinomialParams bp;
    try {
      bp = fit_moment_matching(m);
    } catch (const FitError&) {
      continue;
    }
    ++out.models;
    out.checks += 2;
    const double a = static_cast<double>(bp.alpha);
    const double e1 = std::abs(a * bp.p + bp.delta * bp.p - m.mean);
    const double e2 = std::abs(a * bp.p * bp.q + bp.delta * bp.p * bp.q - m.variance);
    if (e1 > 1e-10 || e2 > 1e-10) {
      std::ostringstream os;
      os << "mean error " << e1 << ", variance error " << e2;
      out.violations.push_back({cm.name, os.str()});
    }
  }
  return out;
}

CorpusScan local_dependence_scan(const std::vector<CorpusModel>& corpus) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    if (cm.model.kind() == LawKind::Independent || !enumerable(cm.model)) continue;
    ++out.models;
    ++out.checks;
    const double v = local_dependence_violation(cm.model);
    if (v > 1e-10) {
      std::ostringstream os;
      os << "factorization gap " << v;
      out.violations.push_back({cm.name, os.str()});
    }
  }
  return out;
}

CorpusScan monte_carlo_scan(const std::vector<CorpusModel>& corpus, const std::vector<std::uint64_t>& seeds,
                            std::size_t samples) {
  CorpusScan out;
  for (const auto& cm : corpus) {
    if (cm.model.kind() == LawKind::Independent || !enumerable(cm.model)) continue;
    ++out.models;
    const double p = fit_alpha_n(cm.model).p;
    const auto exact = evaluate_terms(enumerate_terms(cm.model), p);
    for (std::uint64_t seed : seeds) {
      const auto mc = evaluate_terms(sample_terms(cm.model, samples, seed), p);
      auto compare = [&](const char* what, std::size_t i, const Estimate& e, const Estimate& m) {
        ++out.checks;
        const double tol = m.se > 0.0 ? 4.0 * m.se : kSlack;
        if (std::abs(e.value - m.value) > tol) {
          std::ostringstream os;
          os << "seed " << seed << " " << what << "[" << i + 1 << "]: exact " << e.value << ", estimate " << m.value
             << " +- " << m.se;
          out.violations.push_back({cm.name, os.str()});
        }
      };
      compare("E q^W", 0, exact.q_wn, mc.q_wn);
      for (std::size_t i = 0; i < exact.per_index.size(); ++i) {
        const auto& e = exact.per_index[i];
        const auto& m = mc.per_index[i];
        compare("E (X_i+p) q^W_i", i, e.xi_plus_p_q_wi, m.xi_plus_p_q_wi);
        compare("E (p_i+qX_i) q^W", i, e.pi_plus_qxi_q_wn, m.pi_plus_qxi_q_wn);
        compare("E X_i X_A", i, e.xi_xa, m.xi_xa);
        compare("E X_A", i, e.xa, m.xa);
        compare("E q^W_i", i, e.q_wi, m.q_wi);
        compare("E q^W*", i, e.q_wstar, m.q_wstar);
      }
    }
  }
  return out;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::KnownFalse:
      return "KNOWN-FALSE";
  }
  return "?";
}

namespace {

std::string corpus_detail(const CorpusScan& s) {
  std::ostringstream os;
  os << s.models << " models, " << s.checks << " checks, " << s.violations.size() << " violations";
  if (!s.violations.empty()) os << "; first: " << s.violations[0].model << ": " << s.violations[0].what;
  return os.str();
}

CheckStatus status_of(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  auto timed = [&](const std::string& name, const std::function<std::pair<CheckStatus, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = name;
    try {
      std::tie(r.status, r.detail) = body();
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(std::move(r));
  };
  const bool full = options.level == CorpusLevel::Full;
  const auto grid = stein_grid(options.level);
  const auto corpus = model_corpus(options.level);

  timed("stein-identity", [&] {
    const auto s = stein_identity_scan(grid);
    std::ostringstream os;
    os << s.cases << " (alpha, p, z) cases; max residual " << s.max_residual << ", max |E A g| " << s.max_mean;
    return std::make_pair(status_of(s.max_residual <= 1e-9 && s.max_mean <= 1e-10), os.str());
  });

  DgScan dg;
  timed("dg-scan", [&] {
    dg = dg_scan(grid, full ? 1000 : 200, options.seed, options.dg_constant);
    std::ostringstream os;
    os << dg.checked << " (alpha, p, k, z) points";
    return std::make_pair(CheckStatus::Pass, os.str());
  });
  timed("dg-uniform-bound", [&] {
    std::ostringstream os;
    os << dg.uniform_violations << " violations, worst |dg|/bound " << dg.worst_uniform_ratio;
    if (options.dg_constant != 2.0) os << " (constant mutated to " << options.dg_constant << ")";
    if (dg.uniform_violations) os << "; first: " << dg.first_uniform;
    return std::make_pair(status_of(dg.uniform_violations == 0), os.str());
  });
  timed("dg-tail-bound", [&] {
    std::ostringstream os;
    os << dg.tail_violations << " violations on the k >= z and 2 <= k < z branches";
    if (dg.tail_violations) os << "; first: " << dg.first_tail;
    return std::make_pair(status_of(dg.tail_violations == 0), os.str());
  });
  timed("dg-tail-k1-branch", [&] {
    std::ostringstream os;
    const auto bp = BinomialParams::make(2, 0.05);
    const double d = std::abs(delta_g(SteinContext(bp, 1.5), 1));
    os << dg.tail_k1_violations << " violations of the k = 1 < z branch";
    if (dg.tail_k1_violations) os << " (first: " << dg.first_tail_k1 << ")";
    os << "; counterexample alpha=2 p=0.05 z=1.5: |dg(1)| = " << d << " > " << dg_tail_bound(bp, 1, 1.5);
    return std::make_pair(dg.tail_k1_violations ? CheckStatus::KnownFalse : CheckStatus::Pass, os.str());
  });
  timed("g-bound", [&] {
    std::ostringstream os;
    os << dg.g_bound_violations << " violations of |g(k)| <= 2 q^(k - alpha)";
    return std::make_pair(status_of(dg.g_bound_violations == 0), os.str());
  });
  timed("stoploss-kink-vs-grid", [&] {
    const auto s = stoploss_scan(full ? 200 : 50, 60, 200, options.seed);
    std::ostringstream os;
    os << s.pairs << " pairs, " << s.agreement_failures << " agreement failures, " << s.metric_failures
       << " metric-property failures, worst slack use " << s.worst_slack_use;
    if (!s.first_failure.empty()) os << "; first: " << s.first_failure;
    return std::make_pair(status_of(s.agreement_failures == 0 && s.metric_failures == 0), os.str());
  });
  timed("bound-domination", [&] {
    const auto s = domination_scan(corpus, {"dep_alpha_n", "indep_alpha_n", "dep_moment", "indep_moment", "dep_moment_star"});
    return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
  });
  timed("dep-chosen-p-as-printed", [&] {
    const auto s = domination_scan(corpus, {"dep_chosen_p"});
    return std::make_pair(s.violations.empty() ? CheckStatus::Pass : CheckStatus::KnownFalse, corpus_detail(s));
  });
  timed("zero-case", [&] {
    const auto s = specialization_scan(corpus, false);
    return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
  });
  timed("moment-identities", [&] {
    const auto s = moment_identity_scan(corpus);
    return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
  });
  timed("local-dependence", [&] {
    const auto s = local_dependence_scan(corpus);
    return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
  });
  timed("pricing-bracket", [&] {
    const auto s = bracket_scan(corpus);
    return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
  });
  if (full) {
    timed("monte-carlo-consistency", [&] {
      const auto s = monte_carlo_scan(corpus, {options.seed, options.seed + 1, options.seed + 2}, 20000);
      return std::make_pair(status_of(s.violations.empty()), corpus_detail(s));
    });
  }
  return results;
}

}  // namespace slb
