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

#include "slb/commands.hpp"

#include <sstream>

#include "slb/errors.hpp"
#include "slb/numeric.hpp"

namespace slb {

using nlohmann::json;

std::vector<ComparisonRow> compute_comparison() {
  std::vector<ComparisonRow> rows;
  for (int n = 10; n <= 100; n += 10) {
    const auto model = PortfolioModel::independent(reference_probabilities(static_cast<std::size_t>(n)));
    rows.push_back({n, bound_poisson_existing(model), bound_independent_alpha_n(model, fit_alpha_n(model)),
                    bound_independent_moment(model, fit_moment_matching(model))});
  }
  return rows;
}

std::string render_comparison(const std::vector<ComparisonRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"n", r.n}, {"poisson", r.poisson}, {"indep_alpha_n", r.alpha_n}, {"indep_moment", r.moment}});
    return out.dump(2) + "\n";
  }
  Table t({"n", "poisson", "indep_alpha_n", "indep_moment"});
  for (const auto& r : rows) t.add_row({static_cast<double>(r.n), r.poisson, r.alpha_n, r.moment});
  return t.render(format);
}

namespace {

Table::Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

std::string render_report(const BoundReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) return report_to_json(report).dump(2) + "\n";
  Table t({"bound", "value", "se", "status", "ingredients", "family", "alpha", "p", "delta", "exact d_sl", "note"});
  for (const auto& e : report.entries) {
    std::vector<Table::Cell> row{e.name};
    if (e.applicable) {
      row.push_back(e.value);
      row.push_back(e.se);
    } else {
      row.push_back(std::monostate{});
      row.push_back(std::monostate{});
    }
    row.push_back(std::string(!e.applicable ? "n/a" : e.failed() ? "failed" : e.certified() ? "certified" : "estimated"));
    row.push_back(to_string(e.mode));
    row.push_back(to_string(e.family));
    if (e.params) {
      row.push_back(static_cast<double>(e.params->alpha));
      row.push_back(e.params->p);
      row.push_back(e.params->delta);
    } else {
      row.insert(row.end(), 3, std::monostate{});
    }
    row.push_back(opt_cell(e.exact_dsl));
    row.push_back(e.note);
    t.add_row(std::move(row));
  }
  std::ostringstream best;
  if (report.best_name.empty()) {
    best << "best: none applicable";
  } else {
    best << "best: " << report.best_name << " = " << human_number(report.best_value)
         << (report.best_certified ? " (certified)" : " (estimated)");
  }
  t.add_note(best.str());
  t.add_note("lambda = " + human_number(report.poisson_lambda));
  if (report.exact_dsl) t.add_note("exact d_sl against the best entry's binomial: " + human_number(*report.exact_dsl));
  if (report.fallback_strata > 0) {
    t.add_note(std::to_string(report.fallback_strata) + " Monte Carlo strata had too few samples and used D = 2");
  }
  for (const auto& e : report.errors) t.add_note("error: " + e);
  return t.render(format);
}

std::vector<PriceRow> price_tranches(const RunConfig& config, const BoundReport& report) {
  std::vector<PriceRow> rows;
  std::optional<IntegerPmf> exact;
  try {
    exact = exact_loss_pmf(config.model, config.options.limits);
  } catch (const SizeError&) {
  } catch (const ApplicabilityError&) {
  }
  const std::size_t n = config.model.n();
  for (const auto& spec : config.tranches) {
    PriceRow row;
    row.spec = spec;
    row.z = z_from_zstar(spec, n);
    if (exact) row.exact = tranche_expected_loss(*exact, spec, n);
    try {
      row.bracket = tranche_expected_loss_bracketed(n, spec, report);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_prices(const std::vector<PriceRow>& rows, const BoundReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json out = json::array();
    for (const auto& r : rows) {
      json j{{"label", r.spec.label}, {"R", r.spec.recovery}, {"z_star", r.spec.z_star}, {"z", r.z},
             {"exact", r.exact ? json(*r.exact) : json(nullptr)}};
      if (r.bracket) {
        j["approx"] = r.bracket->approx;
        j["half_width"] = r.bracket->half_width;
        j["lower"] = r.bracket->lower();
        j["upper"] = r.bracket->upper();
        j["certified"] = r.bracket->certified;
        j["bound"] = r.bracket->bound_name;
        j["params"] = params_to_json(r.bracket->params);
      } else {
        j["error"] = r.error;
      }
      out.push_back(std::move(j));
    }
    return json{{"tranches", out}, {"report", report_to_json(report)}}.dump(2) + "\n";
  }
  Table t({"tranche", "R", "z*", "z", "exact", "binomial approx", "half-width", "lower", "upper", "status"});
  for (const auto& r : rows) {
    std::vector<Table::Cell> row{r.spec.label, r.spec.recovery, r.spec.z_star, r.z, opt_cell(r.exact)};
    if (r.bracket) {
      row.push_back(r.bracket->approx);
      row.push_back(r.bracket->half_width);
      row.push_back(r.bracket->lower());
      row.push_back(r.bracket->upper());
      row.push_back(std::string(r.bracket->certified ? "certified (" : "statistical, 4 se (") +
                    r.bracket->bound_name + ")");
    } else {
      row.insert(row.end(), 4, std::monostate{});
      row.push_back(r.error);
    }
    t.add_row(std::move(row));
  }
  return t.render(format);
}

DslResult exact_dsl(const RunConfig& config, DslTarget target) {
  const auto law = exact_loss_pmf(config.model, config.options.limits);
  DslResult out;
  out.target = target;
  if (target == DslTarget::Poisson) {
    out.lambda = compensated_total(config.model.p_list());
    out.curve = stoploss_distance_exact(law, poisson_pmf_truncated(out.lambda, 1e-16));
    return out;
  }
  try {
    out.params = fit_moment_matching(config.model, config.options.limits);
  } catch (const FitError&) {
    out.params = fit_alpha_n(config.model);
  }
  out.curve = stoploss_distance_exact(law, binomial_pmf(*out.params));
  return out;
}

std::string render_dsl(const DslResult& r, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j{{"against", r.target == DslTarget::Poisson ? "poisson" : "binomial"},
           {"d_sl", r.curve.sup_abs},
           {"argsup", r.curve.argsup},
           {"z", r.curve.z_grid},
           {"diff", r.curve.diffs}};
    if (r.params) j["params"] = params_to_json(*r.params);
    if (r.target == DslTarget::Poisson) j["lambda"] = r.lambda;
    return j.dump(2) + "\n";
  }
  Table t({"z", "E(W-z)^+ - E(Y-z)^+"});
  for (std::size_t k = 0; k < r.curve.z_grid.size(); ++k) t.add_row({r.curve.z_grid[k], r.curve.diffs[k]});
  std::ostringstream os;
  os << "d_sl = " << human_number(r.curve.sup_abs) << " at z = " << human_number(r.curve.argsup) << " against ";
  if (r.params) {
    os << "binomial(" << r.params->alpha << ", " << human_number(r.params->p) << ")";
  } else {
    os << "Poisson(" << human_number(r.lambda) << ")";
  }
  t.add_note(os.str());
  return t.render(format);
}

}  // namespace slb
