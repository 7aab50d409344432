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

#include "slb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "slb/errors.hpp"
#include "slb/numeric.hpp"
#include "slb/stoploss.hpp"

namespace slb {

std::string to_string(IngredientMode mode) {
  switch (mode) {
    case IngredientMode::Exact:
      return "exact";
    case IngredientMode::MonteCarlo:
      return "monte-carlo";
    case IngredientMode::ClosedForm:
      return "closed-form";
  }
  return "unknown";
}

std::string to_string(ParamFamily family) {
  switch (family) {
    case ParamFamily::AlphaN:
      return "alpha_n";
    case ParamFamily::MomentMatched:
      return "moment";
    case ParamFamily::Chosen:
      return "chosen";
    case ParamFamily::Poisson:
      return "poisson";
  }
  return "unknown";
}

namespace {

double total_p(std::span<const double> p) { return compensated_total(p); }

std::vector<double> powers(double q, std::size_t top) {
  std::vector<double> out(top + 1);
  out[0] = 1.0;
  for (std::size_t k = 1; k <= top; ++k) out[k] = out[k - 1] * q;
  return out;
}

// p X_A + q^{X_B} (1 - q^{-X_A}) written as p (X_A - q^{X_B - X_A} (1 + q + ... + q^{X_A - 1}))
// so that it cancels exactly when X_A = X_B = 1.
struct ShiftFactor {
  std::vector<double> qp;
  std::vector<double> geo;  // 1 + q + ... + q^{k-1}
  double p;

  ShiftFactor(double p_, double q, std::size_t top) : qp(powers(q, top)), geo(top + 1, 0.0), p(p_) {
    for (std::size_t k = 1; k <= top; ++k) geo[k] = geo[k - 1] + qp[k - 1];
  }
  double operator()(int sa, int sb) const { return p * (sa - qp[sb - sa] * geo[sa]); }
};

// log of c / (p^p_exp q^alpha)
double log_prefactor(double c, int p_exp, const BinomialParams& bp) {
  return std::log(c) - p_exp * std::log(bp.p) - static_cast<double>(bp.alpha) * std::log1p(-bp.p);
}

BoundValue finish(double log_pref, double sum, double se_sum) {
  const double scale = std::exp(log_pref);
  BoundValue out{sum * scale, se_sum * scale, false, sum * scale};
  if (!(out.value >= 0.0)) {
    out.clamped = out.value < 0.0;
    out.value = 0.0;
  }
  return out;
}

void require_independent(const PortfolioModel& model, const char* what) {
  if (model.kind() != LawKind::Independent) {
    throw ApplicabilityError(std::string(what) + " requires independent indicators");
  }
}

// D(W*|.) looked up by conditioning values, per index.
struct SmoothingLookup {
  int a_size;
  int b_size;
  std::vector<double> ab;   // [sa][sb]
  std::vector<double> xab;  // [x][sa][sb]
  std::vector<double> b;    // [sb]

  SmoothingLookup(const IndexSmoothing& sm, const LocalJoint& lj)
      : a_size(lj.a_size()),
        b_size(lj.b_size()),
        ab(static_cast<std::size_t>((a_size + 1) * (b_size + 1)), 2.0),
        xab(static_cast<std::size_t>(2 * (a_size + 1) * (b_size + 1)), 2.0),
        b(static_cast<std::size_t>(b_size + 1), 2.0) {
    for (const auto& s : sm.given_a_b) ab[idx(s.sa, s.sb)] = s.d;
    for (const auto& s : sm.given_x_a_b) xab[s.x * (a_size + 1) * (b_size + 1) + idx(s.sa, s.sb)] = s.d;
    for (const auto& s : sm.given_b) b[static_cast<std::size_t>(s.sb)] = s.d;
  }

  std::size_t idx(int sa, int sb) const { return static_cast<std::size_t>(sa * (b_size + 1) + sb); }
  double given_ab(int sa, int sb) const { return ab[idx(sa, sb)]; }
  double given_xab(int x, int sa, int sb) const { return xab[x * (a_size + 1) * (b_size + 1) + idx(sa, sb)]; }
  double given_b(int sb) const { return b[static_cast<std::size_t>(sb)]; }
};

// p_i E X_{A_i} - E X_i X_{A_i} + q p_i, with its propagated standard error.
Estimate cross_term(const DependentTerms& terms, const std::vector<double>& ea, std::size_t i, double q,
                    const IndexTermValues& v) {
  const double pi = terms.p_list[i];
  return {(pi - v.xi_xa.value) + pi * (ea[i] - (1.0 - q)), v.xi_xa.se};
}

std::vector<double> expected_xa_from_terms(const DependentTerms& terms) {
  std::vector<double> ea(terms.local.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    ea[i] = terms.expect(i, [](int, int sa, int, int) { return static_cast<double>(sa); }).value;
  }
  return ea;
}

}  // namespace

BinomialParams fit_alpha_n(const PortfolioModel& model) {
  const double n = static_cast<double>(model.n());
  const double mean = total_p(model.p_list()) / n;
  if (!(mean > 0.0 && mean < 1.0)) throw FitError("fit_alpha_n: mean probability must lie in (0, 1)");
  return BinomialParams::make(static_cast<long long>(model.n()), mean, 0.0);
}

BinomialParams fit_moment_matching(const LossMoments& m) {
  if (!(m.mean > 0.0)) throw FitError("moment matching: E W must be positive");
  if (!(m.mean_minus_variance > 0.0)) {
    std::ostringstream os;
    os << "moment matching: Var W >= E W (E W = " << m.mean << ", Var W = " << m.variance
       << "); binomial fit needs underdispersion";
    throw FitError(os.str());
  }
  const double p = m.mean_minus_variance / m.mean;
  if (!(p < 1.0)) throw FitError("moment matching: Var W = 0 gives p = 1");
  const double x = m.mean / p;
  const std::int64_t alpha = snapped_floor(x);
  if (alpha < 1) throw FitError("moment matching: (E W)^2 / (E W - Var W) < 1 gives alpha = 0");
  const double delta = std::clamp(x - static_cast<double>(alpha), 0.0, std::nextafter(1.0, 0.0));
  return BinomialParams::make(alpha, p, delta);
}

BinomialParams fit_moment_matching(const PortfolioModel& model, const EnumerationLimits& limits) {
  return fit_moment_matching(loss_moments(model, limits));
}

BinomialParams fit_chosen_p(const PortfolioModel& model, double p_chosen) {
  if (!(p_chosen > 0.0 && p_chosen < 1.0)) throw DomainError("chosen p must lie in (0, 1)");
  const double x = total_p(model.p_list()) / p_chosen;
  const std::int64_t alpha = snapped_floor(x);
  if (alpha < 1) throw FitError("chosen p: floor(sum p_i / p) = 0");
  const double delta = std::clamp(x - static_cast<double>(alpha), 0.0, std::nextafter(1.0, 0.0));
  return BinomialParams::make(alpha, p_chosen, delta);
}

LossMoments moments_from_terms(const DependentTerms& terms, const std::vector<Neighborhood>& hoods) {
  CompensatedSum mean, mmv;
  for (std::size_t i = 0; i < terms.local.size(); ++i) {
    const double pi = terms.p_list[i];
    double ea = 0.0;
    for (int j : hoods[i].a) ea += terms.p_list[static_cast<std::size_t>(j)];
    const double exa = terms.expect(i, [](int x, int sa, int, int) { return static_cast<double>(x * sa); }).value;
    mean.add(pi);
    mmv.add(pi - exa + pi * ea);
  }
  LossMoments m;
  m.mean = mean.value();
  m.mean_minus_variance = mmv.value();
  m.variance = m.mean - m.mean_minus_variance;
  return m;
}

BoundValue bound_dependent_alpha_n(const BinomialParams& params, const DependentTerms& terms) {
  const auto tv = evaluate_terms(terms, params.p);
  CompensatedSum sum;
  double se = 0.0;
  for (const auto& v : tv.per_index) {
    sum.add(v.xi_plus_p_q_wi.value);
    sum.add(-v.pi_plus_qxi_q_wn.value);
    se += v.xi_plus_p_q_wi.se + v.pi_plus_qxi_q_wn.se;
  }
  return finish(log_prefactor(2.0, 1, params), sum.value(), se);
}

double bound_independent_alpha_n(const PortfolioModel& model, const BinomialParams& params) {
  require_independent(model, "independent alpha = n bound");
  const auto p = model.p_list();
  const std::size_t n = p.size();
  const double mean = total_p(p) / static_cast<double>(n);
  const bool at_mean = std::abs(params.p - mean) <= 4 * std::numeric_limits<double>::epsilon() * mean;
  double log_all = 0.0;
  for (double pj : p) log_all += std::log1p(-params.p * pj);
  const double log_pref = log_prefactor(2.0, 0, params);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    double gap;
    if (at_mean) {
      // |mean - p_i| from pairwise differences, exactly 0 when all p_i agree
      CompensatedSum d;
      for (double pj : p) d.add(pj - p[i]);
      gap = std::abs(d.value()) / static_cast<double>(n);
    } else {
      gap = std::abs(params.p - p[i]);
    }
    if (gap == 0.0) continue;
    sum.add(gap * p[i] * std::exp(log_pref + log_all - std::log1p(-params.p * p[i])));
  }
  return sum.value();
}

double bound_independent_moment(const PortfolioModel& model, const BinomialParams& params) {
  require_independent(model, "independent moment bound");
  const auto p = model.p_list();
  const std::size_t n = p.size();
  CompensatedSum s1, s2;
  for (double pj : p) {
    s1.add(pj);
    s2.add(pj * pj);
  }
  const double p_moment = s2.value() / s1.value();
  const bool at_moment = std::abs(params.p - p_moment) <= 4 * std::numeric_limits<double>::epsilon() * p_moment;

  CompensatedSum gamma_sum;
  double gamma_star = 0.0;
  for (double pj : p) {
    const double qj = 1.0 - pj;
    const double g = std::min(0.5, 1.0 - 0.5 * (qj + std::abs(qj - pj)));
    gamma_sum.add(g);
    gamma_star = std::max(gamma_star, g);
  }
  const double smoothing =
      std::sqrt(2.0 / std::numbers::pi) / std::sqrt(0.25 + gamma_sum.value() - gamma_star);

  CompensatedSum spread;
  for (std::size_t i = 0; i < n; ++i) {
    double gap;
    if (at_moment) {
      CompensatedSum d;
      for (double pj : p) d.add(pj * (pj - p[i]));
      gap = std::abs(d.value()) / s1.value();
    } else {
      gap = std::abs(params.p - p[i]);
    }
    spread.add(gap * p[i] * p[i]);
  }
  double log_prod = 0.0;
  for (double pj : p) log_prod += std::log1p(-params.p * pj);
  const double log_pref = log_prefactor(2.0, 0, params);
  const double first = smoothing * spread.value() * std::exp(log_pref);
  const double second = params.delta > 0.0 ? params.delta * params.p * std::exp(log_pref + log_prod) : 0.0;
  return first + second;
}

BoundValue bound_dependent_moment(const BinomialParams& params, const DependentTerms& terms) {
  const double p = params.p;
  const double q = params.q;
  const std::size_t n = terms.local.size();
  const ShiftFactor f(p, q, n + 1);
  const auto& qp = f.qp;
  const auto tv = evaluate_terms(terms, p);
  const auto ea = expected_xa_from_terms(terms);

  CompensatedSum sum;
  double se = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SmoothingLookup d(terms.smoothing[i], terms.local[i]);
    const double pi = terms.p_list[i];
    const auto s1 = terms.expect(i, [&](int, int sa, int sb, int) { return f(sa, sb) * d.given_ab(sa, sb); });
    const auto s2 =
        terms.expect(i, [&](int x, int sa, int sb, int) { return x == 1 ? f(sa, sb) * d.given_xab(1, sa, sb) : 0.0; });
    const auto s3 =
        terms.expect(i, [&](int x, int, int sb, int) { return x == 1 ? (qp[sb] - q) * d.given_b(sb) : 0.0; });
    const auto s5 = terms.expect(i, [&](int, int, int sb, int) { return (qp[sb] - q) * d.given_b(sb); });
    const auto c = cross_term(terms, ea, i, q, tv.per_index[i]);
    sum.add(pi * s1.value);
    sum.add(s2.value);
    sum.add(p * s3.value);
    sum.add((p / q) * std::abs(c.value) * s5.value);
    se += pi * s1.se + s2.se + p * s3.se + (p / q) * (std::abs(c.value) * s5.se + std::abs(s5.value) * c.se);
  }
  const double k4 = params.delta * p * p * p / q;
  sum.add(k4 * tv.q_wn.value);
  se += k4 * tv.q_wn.se;
  return finish(log_prefactor(2.0, 2, params), sum.value(), se);
}

BoundValue bound_dependent_chosen_p(const BinomialParams& params, const DependentTerms& terms) {
  const double p = params.p;
  const auto tv = evaluate_terms(terms, p);
  CompensatedSum sum;
  double se = 0.0;
  for (const auto& v : tv.per_index) {
    sum.add(v.xi_plus_p_q_wi.value);
    sum.add(-v.pi_plus_qxi_q_wn.value);
    se += v.xi_plus_p_q_wi.se + v.pi_plus_qxi_q_wn.se;
  }
  const double k = params.delta * p * p * static_cast<double>(tv.per_index.size());
  sum.add(k * tv.q_wn.value);
  se += k * tv.q_wn.se;
  return finish(log_prefactor(2.0, 1, params), sum.value(), se);
}

BoundValue bound_dependent_moment_star(const BinomialParams& params, const DependentTerms& terms) {
  const double p = params.p;
  const double q = params.q;
  const std::size_t n = terms.local.size();
  const ShiftFactor f(p, q, n + 1);
  const auto& qp = f.qp;
  const auto tv = evaluate_terms(terms, p);
  const auto ea = expected_xa_from_terms(terms);

  CompensatedSum sum;
  double se = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = terms.p_list[i];
    const auto t1 = terms.expect(i, [&](int x, int sa, int sb, int w) {
      return (x + pi) * qp[w] * f(sa, sb);
    });
    const auto t2 = terms.expect(i, [&](int x, int, int sb, int w) { return x * (qp[w + sb] - qp[w + 1]); });
    const auto t4 = terms.expect(i, [&](int, int, int sb, int w) { return qp[w + sb] - qp[w + 1]; });
    const auto c = cross_term(terms, ea, i, q, tv.per_index[i]);
    sum.add(t1.value);
    sum.add(p * t2.value);
    sum.add((p / q) * std::abs(c.value) * t4.value);
    se += t1.se + p * t2.se + (p / q) * (std::abs(c.value) * t4.se + std::abs(t4.value) * c.se);
  }
  const double k3 = params.delta * p * p * p / 2.0;
  sum.add(k3 * tv.q_wn.value);
  se += k3 * tv.q_wn.se;
  return finish(log_prefactor(4.0, 2, params), sum.value(), se);
}

double bound_poisson_existing(const PortfolioModel& model) {
  CompensatedSum lambda, sq;
  for (double pi : model.p_list()) {
    lambda.add(pi);
    sq.add(pi * pi);
  }
  return (2.0 * std::exp(lambda.value()) - 1.0) * sq.value();
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

BoundReport compile_report(const PortfolioModel& model, const BoundOptions& options) {
  BoundReport report;
  report.poisson_lambda = total_p(model.p_list());

  std::optional<DependentTerms> terms;
  if (!options.force_monte_carlo) {
    try {
      terms = enumerate_terms(model, options.limits);
    } catch (const SizeError&) {
    } catch (const ApplicabilityError&) {
    }
  }
  if (!terms) {
    try {
      terms = sample_terms(model, options.mc_samples, options.seed);
    } catch (const ApplicabilityError& e) {
      report.errors.push_back(std::string("terms: ") + e.what());
    }
  }
  const bool mc = terms && terms->mode == TermsMode::MonteCarlo;
  report.terms_mode = mc ? IngredientMode::MonteCarlo : IngredientMode::Exact;
  if (terms) report.fallback_strata = terms->fallback_strata;

  std::optional<IntegerPmf> exact_law;
  if (options.compute_exact) {
    try {
      exact_law = exact_loss_pmf(model, options.limits);
    } catch (const Error&) {
    }
  }

  auto entry = [&](const std::string& name, ParamFamily family) -> BoundEntry& {
    BoundEntry e;
    e.name = name;
    e.family = family;
    report.entries.push_back(std::move(e));
    return report.entries.back();
  };
  auto closed = [](double v) { return BoundValue{v, 0.0, false, v}; };
  auto fill = [&](BoundEntry& e, const BoundValue& v, IngredientMode mode) {
    e.value = v.value;
    e.raw = v.raw;
    if (v.clamped) {
      std::ostringstream os;
      os << "formula evaluated negative (" << v.raw << "); reported as 0";
      e.note = os.str();
    }
    e.se = v.se;
    e.clamped = v.clamped;
    e.mode = mode;
    e.applicable = true;
  };

  // alpha = n family
  std::optional<BinomialParams> alpha_n;
  try {
    alpha_n = fit_alpha_n(model);
  } catch (const Error& e) {
    report.errors.push_back(std::string("fit_alpha_n: ") + e.what());
  }
  {
    auto& e = entry("dep_alpha_n", ParamFamily::AlphaN);
    e.params = alpha_n;
    if (alpha_n && terms) {
      fill(e, bound_dependent_alpha_n(*alpha_n, *terms), report.terms_mode);
    } else {
      e.note = alpha_n ? "no dependence terms" : "alpha = n fit failed";
    }
  }
  {
    auto& e = entry("indep_alpha_n", ParamFamily::AlphaN);
    e.params = alpha_n;
    if (model.kind() != LawKind::Independent) {
      e.note = "requires independent indicators";
    } else if (alpha_n) {
      fill(e, closed(bound_independent_alpha_n(model, *alpha_n)), IngredientMode::ClosedForm);
    }
  }

  // moment-matched family
  std::optional<BinomialParams> moment;
  bool moments_estimated = false;
  try {
    LossMoments m;
    try {
      m = loss_moments(model, options.limits);
    } catch (const Error&) {
      if (!terms) throw;
      m = moments_from_terms(*terms, model.neighborhoods());
      moments_estimated = mc;
    }
    moment = fit_moment_matching(m);
  } catch (const Error& e) {
    report.errors.push_back(std::string("fit_moment_matching: ") + e.what());
  }
  const IngredientMode moment_mode =
      moments_estimated ? IngredientMode::MonteCarlo : report.terms_mode;
  for (const char* name : {"dep_moment", "indep_moment"}) {
    auto& e = entry(name, ParamFamily::MomentMatched);
    e.params = moment;
    if (!moment) {
      e.note = "moment fit failed";
      continue;
    }
    if (e.name == "dep_moment") {
      if (terms) {
        fill(e, bound_dependent_moment(*moment, *terms), moment_mode);
      } else {
        e.note = "no dependence terms";
      }
    } else if (model.kind() != LawKind::Independent) {
      e.note = "requires independent indicators";
    } else {
      fill(e, closed(bound_independent_moment(model, *moment)), IngredientMode::ClosedForm);
    }
  }

  // chosen p family
  {
    auto& e = entry("dep_chosen_p", ParamFamily::Chosen);
    std::optional<double> pc = options.p_chosen;
    if (!pc && moment) pc = moment->p;
    if (!pc && alpha_n) pc = alpha_n->p;
    try {
      if (!pc) throw FitError("no p available");
      e.params = fit_chosen_p(model, *pc);
      if (terms) {
        fill(e, bound_dependent_chosen_p(*e.params, *terms),
             options.p_chosen || !moments_estimated ? report.terms_mode : IngredientMode::MonteCarlo);
      } else {
        e.note = "no dependence terms";
      }
    } catch (const Error& err) {
      // an explicitly requested p must fit
      if (options.p_chosen) throw;
      e.note = err.what();
    }
  }
  {
    auto& e = entry("dep_moment_star", ParamFamily::MomentMatched);
    e.params = moment;
    if (!moment) {
      e.note = "moment fit failed";
    } else if (terms) {
      fill(e, bound_dependent_moment_star(*moment, *terms), moment_mode);
    } else {
      e.note = "no dependence terms";
    }
  }
  {
    auto& e = entry("poisson", ParamFamily::Poisson);
    fill(e, closed(bound_poisson_existing(model)), IngredientMode::ClosedForm);
    e.note = "distance to Poisson(lambda), not to a binomial";
  }

  // Keep report order fixed regardless of construction order.
  std::vector<BoundEntry> ordered;
  for (const auto& name : bound_names()) {
    for (auto& e : report.entries) {
      if (e.name == name) ordered.push_back(std::move(e));
    }
  }
  report.entries = std::move(ordered);

  if (exact_law) {
    std::map<std::pair<long long, double>, double> cache;
    for (auto& e : report.entries) {
      if (e.family == ParamFamily::Poisson) {
        e.exact_dsl = stoploss_distance_exact(*exact_law, poisson_pmf_truncated(report.poisson_lambda, 1e-16)).sup_abs;
      } else if (e.params) {
        const auto key = std::make_pair(e.params->alpha, e.params->p);
        auto it = cache.find(key);
        if (it == cache.end()) {
          it = cache.emplace(key, stoploss_distance_exact(*exact_law, binomial_pmf(*e.params)).sup_abs).first;
        }
        e.exact_dsl = it->second;
      }
    }
  }

  const BoundEntry* best = nullptr;
  for (const bool want_certified : {true, false}) {
    for (const auto& e : report.entries) {
      if (!e.applicable || e.family == ParamFamily::Poisson || !std::isfinite(e.value)) continue;
      if (e.failed()) continue;
      if (e.certified() != want_certified) continue;
      if (!best || e.value < best->value) best = &e;
    }
    if (best) break;
  }
  if (best) {
    report.best_name = best->name;
    report.best_value = best->value;
    report.best_se = best->se;
    report.best_certified = best->certified();
    report.fitted = best->params;
    report.fitted_family = best->family;
    report.exact_dsl = best->exact_dsl;
  }
  return report;
}

}  // namespace slb
