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

#include "slb/dependence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "slb/errors.hpp"
#include "slb/numeric.hpp"
#include "slb/rng.hpp"

namespace slb {

namespace {

void validate_p_list(std::span<const double> p_list) {
  if (p_list.empty()) throw DomainError("PortfolioModel: n must be positive");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (!(p_list[i] > 0.0 && p_list[i] < 1.0)) {
      std::ostringstream os;
      os << "PortfolioModel: p[" << i << "] = " << p_list[i] << " is outside (0, 1)";
      throw DomainError(os.str());
    }
  }
}

void validate_neighborhoods(const std::vector<Neighborhood>& hoods, std::size_t n) {
  if (hoods.size() != n) throw DomainError("PortfolioModel: need one neighborhood per index");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [a, b] = hoods[i];
    auto sorted_in_range = [n](const std::vector<int>& s) {
      if (!std::is_sorted(s.begin(), s.end())) return false;
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
      return std::all_of(s.begin(), s.end(), [n](int v) { return v >= 0 && static_cast<std::size_t>(v) < n; });
    };
    std::ostringstream os;
    os << "PortfolioModel: neighborhood " << i << ": ";
    if (!sorted_in_range(a) || !sorted_in_range(b)) {
      os << "indices must be sorted, distinct and in range";
      throw DomainError(os.str());
    }
    if (!std::binary_search(a.begin(), a.end(), static_cast<int>(i))) {
      os << "A_i must contain i";
      throw DomainError(os.str());
    }
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) {
      os << "A_i must be a subset of B_i";
      throw DomainError(os.str());
    }
  }
}

std::uint64_t mask_of(const std::vector<int>& s) {
  std::uint64_t m = 0;
  for (int v : s) m |= std::uint64_t{1} << v;
  return m;
}

void check_table_size(std::size_t n, const EnumerationLimits& limits) {
  if (n > static_cast<std::size_t>(limits.max_table_n) || n > 62) {
    std::ostringstream os;
    os << "model with n = " << n << " exceeds the enumeration limit (" << limits.max_table_n
       << "); use sample_terms";
    throw SizeError(os.str());
  }
}

IntegerPmf pmf_from_table(std::span<const double> table, std::size_t n) {
  std::vector<double> probs(n + 1, 0.0);
  std::vector<CompensatedSum> acc(n + 1);
  for (std::size_t x = 0; x < table.size(); ++x) acc[static_cast<std::size_t>(std::popcount(x))].add(table[x]);
  for (std::size_t k = 0; k <= n; ++k) probs[k] = std::max(0.0, acc[k].value());
  return IntegerPmf(std::move(probs));
}

std::vector<double> normalized(std::vector<double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  if (total > 0.0) {
    for (double& x : v) x /= total;
  }
  return v;
}

void build_smoothing(DependentTerms& terms) {
  const bool mc = terms.mode == TermsMode::MonteCarlo;
  const double n_samples = static_cast<double>(terms.n_samples);
  terms.smoothing.assign(terms.local.size(), {});
  terms.fallback_strata = 0;
  for (std::size_t i = 0; i < terms.local.size(); ++i) {
    const LocalJoint& lj = terms.local[i];
    using Key = std::tuple<int, int, int>;
    struct Acc {
      std::vector<double> w_law;
      double prob_x1 = 0.0;
    };
    std::map<Key, Acc> by_ab, by_xab, by_b;
    auto touch = [&](std::map<Key, Acc>& m, Key key, int w, double mass, int x) {
      auto& acc = m[key];
      if (acc.w_law.empty()) acc.w_law.assign(static_cast<std::size_t>(lj.rest_size()) + 1, 0.0);
      acc.w_law[static_cast<std::size_t>(w)] += mass;
      if (x == 1) acc.prob_x1 += mass;
    };
    lj.for_each([&](int x, int sa, int sb, int w, double mass) {
      touch(by_ab, {-1, sa, sb}, w, mass, x);
      touch(by_xab, {x, sa, sb}, w, mass, x);
      touch(by_b, {-1, -1, sb}, w, mass, x);
    });
    auto emit = [&](const std::map<Key, Acc>& m, std::vector<Stratum>& out) {
      for (const auto& [key, acc] : m) {
        Stratum s;
        std::tie(s.x, s.sa, s.sb) = key;
        for (double v : acc.w_law) s.prob += v;
        s.prob_x1 = acc.prob_x1;
        if (mc && std::llround(s.prob * n_samples) < static_cast<long long>(kMinStratumSamples)) {
          s.d = 2.0;
          s.fallback = true;
          ++terms.fallback_strata;
        } else {
          s.d = std::min(2.0, 2.0 * dtv_shift(normalized(acc.w_law)));
        }
        out.push_back(s);
      }
    };
    emit(by_ab, terms.smoothing[i].given_a_b);
    emit(by_xab, terms.smoothing[i].given_x_a_b);
    emit(by_b, terms.smoothing[i].given_b);
  }
}

std::vector<LocalJoint> empty_locals(const PortfolioModel& model) {
  std::vector<LocalJoint> locals;
  const int n = static_cast<int>(model.n());
  for (const auto& h : model.neighborhoods()) {
    locals.emplace_back(static_cast<int>(h.a.size()), static_cast<int>(h.b.size()),
                        n - static_cast<int>(h.b.size()));
  }
  return locals;
}

// Scatters one outcome (bit i of x is X_i) with weight `mass` into every
// local joint.
struct LocalScatter {
  std::vector<std::uint64_t> mask_a;
  std::vector<std::uint64_t> mask_b;

  explicit LocalScatter(const PortfolioModel& model) {
    for (const auto& h : model.neighborhoods()) {
      mask_a.push_back(mask_of(h.a));
      mask_b.push_back(mask_of(h.b));
    }
  }

  void add(std::vector<LocalJoint>& locals, std::uint64_t x, double mass) const {
    const int w = std::popcount(x);
    for (std::size_t i = 0; i < locals.size(); ++i) {
      const int xi = static_cast<int>((x >> i) & 1u);
      const int sa = std::popcount(x & mask_a[i]);
      const int sb = std::popcount(x & mask_b[i]);
      locals[i].at(xi, sa, sb, w - sb) += mass;
    }
  }
};

std::vector<double> without_index(std::span<const double> p, std::size_t skip) {
  std::vector<double> out;
  out.reserve(p.size() - 1);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j != skip) out.push_back(p[j]);
  }
  return out;
}

}  // namespace

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Independent: return "independent";
    case LawKind::ExplicitJoint: return "explicit_joint";
    case LawKind::LatentOneDependent: return "latent_one_dependent";
    case LawKind::SamplerOnly: return "sampler";
  }
  return "unknown";
}

std::vector<Neighborhood> singleton_neighborhoods(std::size_t n) {
  std::vector<Neighborhood> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {{static_cast<int>(i)}, {static_cast<int>(i)}};
  return out;
}

std::vector<Neighborhood> window_neighborhoods(std::size_t n, int radius_a, int radius_b) {
  std::vector<Neighborhood> out(n);
  const int last = static_cast<int>(n) - 1;
  for (int i = 0; i <= last; ++i) {
    for (int j = std::max(0, i - radius_a); j <= std::min(last, i + radius_a); ++j) out[i].a.push_back(j);
    for (int j = std::max(0, i - radius_b); j <= std::min(last, i + radius_b); ++j) out[i].b.push_back(j);
  }
  return out;
}

PortfolioModel::PortfolioModel(std::vector<double> p_list, std::vector<Neighborhood> neighborhoods,
                               PortfolioLaw law)
    : p_list_(std::move(p_list)), neighborhoods_(std::move(neighborhoods)), law_(std::move(law)) {
  validate_p_list(p_list_);
  validate_neighborhoods(neighborhoods_, p_list_.size());
}

PortfolioModel PortfolioModel::independent(std::vector<double> p_list) {
  const std::size_t n = p_list.size();
  return PortfolioModel(std::move(p_list), singleton_neighborhoods(n), IndependentLaw{});
}

PortfolioModel PortfolioModel::explicit_joint(std::vector<double> p_list, std::vector<double> table,
                                              std::vector<Neighborhood> neighborhoods) {
  const std::size_t n = p_list.size();
  validate_p_list(p_list);
  if (n > 30 || table.size() != (std::size_t{1} << n)) {
    throw DomainError("explicit_joint: table must have 2^n entries");
  }
  CompensatedSum total;
  std::vector<CompensatedSum> marg(n);
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (!(table[x] >= 0.0) || !std::isfinite(table[x])) throw DomainError("explicit_joint: negative entry");
    total.add(table[x]);
    for (std::size_t i = 0; i < n; ++i) {
      if ((x >> i) & 1u) marg[i].add(table[x]);
    }
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw DomainError("explicit_joint: table does not sum to 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(marg[i].value() - p_list[i]) > 1e-9) {
      std::ostringstream os;
      os << "explicit_joint: marginal " << i << " is " << marg[i].value() << ", expected " << p_list[i];
      throw DomainError(os.str());
    }
  }
  if (neighborhoods.empty()) {
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    neighborhoods.assign(n, Neighborhood{all, all});
  }
  return PortfolioModel(std::move(p_list), std::move(neighborhoods), ExplicitJointLaw{std::move(table)});
}

PortfolioModel PortfolioModel::latent_one_dependent(std::vector<double> p_list, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("latent_one_dependent: theta must lie in (0, 1)");
  validate_p_list(p_list);
  LatentOneDependentLaw law{theta, {}};
  for (double p : p_list) law.thresholds.push_back(latent_threshold(p, theta));
  const std::size_t n = p_list.size();
  return PortfolioModel(std::move(p_list), window_neighborhoods(n, 1, 2), std::move(law));
}

PortfolioModel PortfolioModel::sampler(std::vector<double> p_list, std::vector<Neighborhood> neighborhoods,
                                       SamplerFn draw) {
  if (!draw) throw DomainError("sampler: empty draw function");
  return PortfolioModel(std::move(p_list), std::move(neighborhoods), SamplerLaw{std::move(draw)});
}

LawKind PortfolioModel::kind() const {
  return static_cast<LawKind>(law_.index());
}

PortfolioModel PortfolioModel::with_neighborhoods(std::vector<Neighborhood> neighborhoods) const {
  return PortfolioModel(p_list_, std::move(neighborhoods), law_);
}

std::vector<double> joint_table(const PortfolioModel& model, const EnumerationLimits& limits) {
  const std::size_t n = model.n();
  switch (model.kind()) {
    case LawKind::Independent: {
      check_table_size(n, limits);
      std::vector<double> table{1.0};
      for (double p : model.p_list()) {
        std::vector<double> next(table.size() * 2);
        for (std::size_t x = 0; x < table.size(); ++x) {
          next[x] = table[x] * (1.0 - p);
          next[x + table.size()] = table[x] * p;
        }
        table = std::move(next);
      }
      return table;
    }
    case LawKind::ExplicitJoint:
      check_table_size(n, limits);
      return std::get<ExplicitJointLaw>(model.law()).table;
    case LawKind::LatentOneDependent: {
      if (n > static_cast<std::size_t>(std::min(limits.max_latent_n, limits.max_table_n))) {
        std::ostringstream os;
        os << "latent model with n = " << n << " exceeds the enumeration limit ("
           << std::min(limits.max_latent_n, limits.max_table_n) << "); use sample_terms";
        throw SizeError(os.str());
      }
      return latent_window_table(std::get<LatentOneDependentLaw>(model.law()), 0, n);
    }
    case LawKind::SamplerOnly:
      throw ApplicabilityError("sampler-only model has no joint table; use sample_terms");
  }
  throw ApplicabilityError("unknown law");
}

IntegerPmf exact_loss_pmf(const PortfolioModel& model, const EnumerationLimits& limits) {
  if (model.kind() == LawKind::Independent) return poisson_binomial_pmf(model.p_list());
  return pmf_from_table(joint_table(model, limits), model.n());
}

LossMoments loss_moments(const PortfolioModel& model, const EnumerationLimits& limits) {
  LossMoments m;
  const auto p = model.p_list();
  if (model.kind() == LawKind::Independent) {
    CompensatedSum mean, var, sq;
    for (double pi : p) {
      mean.add(pi);
      var.add(pi * (1.0 - pi));
      sq.add(pi * pi);
    }
    return {mean.value(), var.value(), sq.value()};
  }
  if (model.kind() == LawKind::LatentOneDependent &&
      model.n() > static_cast<std::size_t>(std::min(limits.max_latent_n, limits.max_table_n))) {
    // Only neighbours share a latent, so Var W needs adjacent pairs only.
    const auto& law = std::get<LatentOneDependentLaw>(model.law());
    CompensatedSum mean, var, sq;
    for (double pi : p) {
      mean.add(pi);
      var.add(pi * (1.0 - pi));
      sq.add(pi * pi);
    }
    for (std::size_t i = 0; i + 1 < model.n(); ++i) {
      const auto pair = latent_window_table(law, i, 2);
      const double cov = pair[3] - p[i] * p[i + 1];
      var.add(2.0 * cov);
      sq.add(-2.0 * cov);
    }
    return {mean.value(), var.value(), sq.value()};
  }
  const auto [mean, var] = mean_variance(exact_loss_pmf(model, limits));
  return {mean, var, mean - var};
}

LocalJoint::LocalJoint(int a_size, int b_size, int rest_size)
    : a_size_(a_size),
      b_size_(b_size),
      rest_size_(rest_size),
      mass_(static_cast<std::size_t>(2 * (a_size + 1) * (b_size + 1) * (rest_size + 1)), 0.0) {}

DependentTerms enumerate_terms(const PortfolioModel& model, const EnumerationLimits& limits) {
  DependentTerms terms;
  terms.mode = TermsMode::Exact;
  terms.p_list.assign(model.p_list().begin(), model.p_list().end());
  terms.local = empty_locals(model);
  if (model.kind() == LawKind::Independent) {
    // W_i^* is the Poisson-binomial of the other indices; reuse it across
    // indices sharing the same p_i.
    std::map<double, IntegerPmf> rest_by_p;
    const auto p = model.p_list();
    for (std::size_t i = 0; i < model.n(); ++i) {
      auto it = rest_by_p.find(p[i]);
      if (it == rest_by_p.end()) {
        it = rest_by_p.emplace(p[i], poisson_binomial_pmf(without_index(p, i))).first;
      }
      const auto rest = it->second.probs();
      for (std::size_t w = 0; w < rest.size(); ++w) {
        terms.local[i].at(0, 0, 0, static_cast<int>(w)) = (1.0 - p[i]) * rest[w];
        terms.local[i].at(1, 1, 1, static_cast<int>(w)) = p[i] * rest[w];
      }
    }
  } else {
    const auto table = joint_table(model, limits);
    const LocalScatter scatter(model);
    for (std::size_t x = 0; x < table.size(); ++x) {
      if (table[x] > 0.0) scatter.add(terms.local, x, table[x]);
    }
  }
  build_smoothing(terms);
  return terms;
}

DependentTerms sample_terms(const PortfolioModel& model, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw DomainError("sample_terms: n_samples must be at least 1000");
  const std::size_t n = model.n();
  if (n > 64) throw SizeError("sample_terms: at most 64 indicators are supported");
  DependentTerms terms;
  terms.mode = TermsMode::MonteCarlo;
  terms.n_samples = n_samples;
  terms.p_list.assign(model.p_list().begin(), model.p_list().end());
  terms.local = empty_locals(model);
  const LocalScatter scatter(model);
  const auto p = model.p_list();

  std::vector<double> cumulative;
  if (model.kind() == LawKind::ExplicitJoint) {
    const auto& table = std::get<ExplicitJointLaw>(model.law()).table;
    cumulative.resize(table.size());
    double run = 0.0;
    for (std::size_t x = 0; x < table.size(); ++x) cumulative[x] = (run += table[x]);
  }
  std::vector<double> latents(n + 1);
  std::vector<std::uint8_t> draw(n);

  for (std::uint64_t s = 0; s < n_samples; ++s) {
    std::uint64_t x = 0;
    switch (model.kind()) {
      case LawKind::Independent:
        for (std::size_t i = 0; i < n; ++i) {
          CounterStream rng(seed, s, static_cast<std::uint32_t>(i));
          if (rng.uniform() < p[i]) x |= std::uint64_t{1} << i;
        }
        break;
      case LawKind::ExplicitJoint: {
        CounterStream rng(seed, s, 0);
        const double u = rng.uniform() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        x = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
        break;
      }
      case LawKind::LatentOneDependent: {
        const auto& law = std::get<LatentOneDependentLaw>(model.law());
        for (std::size_t j = 0; j <= n; ++j) latents[j] = CounterStream(seed, s, static_cast<std::uint32_t>(j)).uniform();
        for (std::size_t i = 0; i < n; ++i) {
          if ((1.0 - law.theta) * latents[i] + law.theta * latents[i + 1] > law.thresholds[i]) {
            x |= std::uint64_t{1} << i;
          }
        }
        break;
      }
      case LawKind::SamplerOnly: {
        std::fill(draw.begin(), draw.end(), std::uint8_t{0});
        std::get<SamplerLaw>(model.law()).draw(seed, s, draw);
        for (std::size_t i = 0; i < n; ++i) {
          if (draw[i]) x |= std::uint64_t{1} << i;
        }
        break;
      }
    }
    scatter.add(terms.local, x, 1.0);
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  for (auto& lj : terms.local) {
    for (int xi = 0; xi <= 1; ++xi)
      for (int sa = 0; sa <= lj.a_size(); ++sa)
        for (int sb = 0; sb <= lj.b_size(); ++sb)
          for (int w = 0; w <= lj.rest_size(); ++w) lj.at(xi, sa, sb, w) *= inv;
  }
  build_smoothing(terms);
  return terms;
}

TermValues evaluate_terms(const DependentTerms& terms, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("evaluate_terms: p must lie in (0, 1)");
  const double q = 1.0 - p;
  const std::size_t n = terms.p_list.size();
  std::vector<double> qpow(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) qpow[k] = qpow[k - 1] * q;
  TermValues out;
  out.p = p;
  out.per_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = terms.p_list[i];
    auto& v = out.per_index[i];
    v.xi_plus_p_q_wi = terms.expect(i, [&](int x, int sa, int sb, int w) { return (x + p) * qpow[w + sb - sa]; });
    v.pi_plus_qxi_q_wn = terms.expect(i, [&](int x, int, int sb, int w) { return (pi + q * x) * qpow[w + sb]; });
    v.xi_xa = terms.expect(i, [](int x, int sa, int, int) { return static_cast<double>(x * sa); });
    v.xa = terms.expect(i, [](int, int sa, int, int) { return static_cast<double>(sa); });
    v.q_wi = terms.expect(i, [&](int, int sa, int sb, int w) { return qpow[w + sb - sa]; });
    v.q_wstar = terms.expect(i, [&](int, int, int, int w) { return qpow[w]; });
  }
  if (n > 0) out.q_wn = terms.expect(0, [&](int, int, int sb, int w) { return qpow[w + sb]; });
  return out;
}

double local_dependence_violation(const PortfolioModel& model, const EnumerationLimits& limits) {
  const auto table = joint_table(model, limits);
  const std::size_t n = model.n();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& h = model.neighborhoods()[i];
    const std::uint64_t ma = mask_of(h.a);
    const std::uint64_t mb = mask_of(h.b);
    const std::size_t patterns = std::size_t{1} << h.a.size();
    // joint tables of (X_i, W_i), (X_i, W*) and (X_A pattern, W*)
    std::vector<std::vector<double>> xi_wi(2, std::vector<double>(n + 1, 0.0));
    std::vector<std::vector<double>> xi_ws(2, std::vector<double>(n + 1, 0.0));
    std::vector<std::vector<double>> pa_ws(patterns, std::vector<double>(n + 1, 0.0));
    for (std::size_t x = 0; x < table.size(); ++x) {
      const double m = table[x];
      if (m == 0.0) continue;
      const int xi = static_cast<int>((x >> i) & 1u);
      const int w = std::popcount(x);
      const int wi = w - std::popcount(x & ma);
      const int ws = w - std::popcount(x & mb);
      std::size_t pattern = 0;
      for (std::size_t k = 0; k < h.a.size(); ++k) {
        if ((x >> h.a[k]) & 1u) pattern |= std::size_t{1} << k;
      }
      xi_wi[xi][wi] += m;
      xi_ws[xi][ws] += m;
      pa_ws[pattern][ws] += m;
    }
    auto factorization_gap = [&](const std::vector<std::vector<double>>& joint) {
      std::vector<double> left(joint.size(), 0.0), right(n + 1, 0.0);
      for (std::size_t r = 0; r < joint.size(); ++r)
        for (std::size_t c = 0; c <= n; ++c) {
          left[r] += joint[r][c];
          right[c] += joint[r][c];
        }
      double gap = 0.0;
      for (std::size_t r = 0; r < joint.size(); ++r)
        for (std::size_t c = 0; c <= n; ++c) gap = std::max(gap, std::abs(joint[r][c] - left[r] * right[c]));
      return gap;
    };
    worst = std::max({worst, factorization_gap(xi_wi), factorization_gap(xi_ws), factorization_gap(pa_ws)});
  }
  return worst;
}

}  // namespace slb
