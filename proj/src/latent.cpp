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

#include <algorithm>
#include <cmath>
#include <vector>

#include "slb/dependence.hpp"
#include "slb/errors.hpp"

namespace slb {

namespace {

// Piecewise polynomial on [0, 1]; piece k lives on [breaks[k], breaks[k+1]]
// and is stored in powers of the local offset s = x - breaks[k].
struct PiecewisePoly {
  std::vector<double> breaks;
  std::vector<std::vector<double>> coef;

  static PiecewisePoly constant(double v) { return {{0.0, 1.0}, {{v}}}; }

  std::size_t piece_of(double x) const {
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    const auto k = static_cast<std::ptrdiff_t>(it - breaks.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(coef.size()) - 1));
  }

  double eval_piece(std::size_t k, double s) const {
    const auto& c = coef[k];
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * s + c[j];
    return acc;
  }

  // Continuous antiderivative vanishing at 0.
  PiecewisePoly antiderivative() const {
    PiecewisePoly out;
    out.breaks = breaks;
    out.coef.resize(coef.size());
    double base = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) {
      auto& c = out.coef[k];
      c.resize(coef[k].size() + 1);
      c[0] = base;
      for (std::size_t j = 0; j < coef[k].size(); ++j) c[j + 1] = coef[k][j] / static_cast<double>(j + 1);
      base = out.eval_piece(k, breaks[k + 1] - breaks[k]);
    }
    return out;
  }

  double end_value() const { return eval_piece(coef.size() - 1, breaks.back() - breaks[breaks.size() - 2]); }
};

// h(w) = F(clamp((t - b w) / a, 0, 1)) for the cumulative F of the previous
// latent's weight function.
PiecewisePoly compose_threshold(const PiecewisePoly& cumulative, double t, double a, double b) {
  std::vector<double> cuts{0.0, 1.0};
  for (double beta : cumulative.breaks) {
    const double w = (t - a * beta) / b;
    if (w > 0.0 && w < 1.0) cuts.push_back(w);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breaks;
  for (double w : cuts) {
    if (breaks.empty() || w - breaks.back() > 1e-15) breaks.push_back(w);
  }
  breaks.back() = 1.0;

  const double total = cumulative.end_value();
  const double kappa = -b / a;
  PiecewisePoly out;
  out.breaks = breaks;
  out.coef.resize(breaks.size() - 1);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double wl = breaks[k];
    const double wm = 0.5 * (wl + breaks[k + 1]);
    const double cm = (t - b * wm) / a;
    if (cm <= 0.0) {
      out.coef[k] = {0.0};
      continue;
    }
    if (cm >= 1.0) {
      out.coef[k] = {total};
      continue;
    }
    const std::size_t piece = cumulative.piece_of(cm);
    const auto& f = cumulative.coef[piece];
    const double d = (t - b * wl) / a - cumulative.breaks[piece];
    // Horner in polynomial arithmetic: F(d + kappa s).
    std::vector<double> acc{f.back()};
    for (std::size_t j = f.size() - 1; j-- > 0;) {
      std::vector<double> next(acc.size() + 1, 0.0);
      for (std::size_t m = 0; m < acc.size(); ++m) {
        next[m] += d * acc[m];
        next[m + 1] += kappa * acc[m];
      }
      next[0] += f[j];
      acc = std::move(next);
    }
    out.coef[k] = std::move(acc);
  }
  return out;
}

PiecewisePoly complement(const PiecewisePoly& h, double total) {
  PiecewisePoly out = h;
  for (auto& c : out.coef) {
    for (double& v : c) v = -v;
    c[0] += total;
  }
  return out;
}

struct WindowEnumerator {
  const LatentOneDependentLaw& law;
  std::size_t start;
  std::size_t len;
  std::vector<double>& table;
  double a;
  double b;

  void run(std::size_t depth, const PiecewisePoly& weight, std::size_t bits) {
    const PiecewisePoly cumulative = weight.antiderivative();
    const double total = cumulative.end_value();
    const PiecewisePoly zero_branch = compose_threshold(cumulative, law.thresholds[start + depth], a, b);
    const std::size_t one_bits = bits | (std::size_t{1} << depth);
    if (depth + 1 == len) {
      const double p0 = zero_branch.antiderivative().end_value();
      table[bits] = p0;
      table[one_bits] = total - p0;
      return;
    }
    run(depth + 1, zero_branch, bits);
    run(depth + 1, complement(zero_branch, total), one_bits);
  }
};

}  // namespace

double latent_exceedance(double t, double theta) {
  const double a = 1.0 - theta;
  const double b = theta;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  if (t <= lo) return 1.0 - t * t / (2.0 * a * b);
  if (t <= hi) return 1.0 - (t - 0.5 * lo) / hi;
  return (1.0 - t) * (1.0 - t) / (2.0 * a * b);
}

double latent_threshold(double p, double theta) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("latent_threshold: p must lie in (0, 1)");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("latent_threshold: theta must lie in (0, 1)");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (latent_exceedance(mid, theta) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> latent_window_table(const LatentOneDependentLaw& law, std::size_t start,
                                        std::size_t len) {
  if (len == 0) return {1.0};
  if (start + len > law.thresholds.size()) throw DomainError("latent_window_table: window out of range");
  std::vector<double> table(std::size_t{1} << len, 0.0);
  WindowEnumerator walker{law, start, len, table, 1.0 - law.theta, law.theta};
  walker.run(0, PiecewisePoly::constant(1.0), 0);
  double total = 0.0;
  for (double& v : table) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  for (double& v : table) v /= total;
  return table;
}

}  // namespace slb
