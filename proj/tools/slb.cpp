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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slb/commands.hpp"
#include "slb/errors.hpp"
#include "slb/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kParse = 2, kFit = 3, kSize = 4 };

struct Overrides {
  std::string config;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> p_chosen;
  std::optional<int> max_n;
  bool monte_carlo = false;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "portfolio JSON")->required();
  cmd->add_option("-f,--format", o.format, "csv | markdown | json");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
  cmd->add_option("--max-enumeration-n", o.max_n, "largest n evaluated exhaustively");
}

slb::RunConfig load(const Overrides& o) {
  auto cfg = slb::load_config(o.config);
  if (o.seed) cfg.options.seed = *o.seed;
  if (o.samples) {
    if (*o.samples < 1000) throw slb::ParseError("--samples must be at least 1000");
    cfg.options.mc_samples = *o.samples;
  }
  if (o.p_chosen) {
    if (!(*o.p_chosen > 0.0 && *o.p_chosen < 1.0)) throw slb::ParseError("--p-chosen must lie in (0, 1)");
    cfg.options.p_chosen = *o.p_chosen;
  }
  if (o.max_n) cfg.options.limits.max_table_n = *o.max_n;
  if (o.monte_carlo) cfg.options.force_monte_carlo = true;
  return cfg;
}

slb::OutputFormat format_of(const std::string& flag, const std::optional<slb::OutputFormat>& from_config) {
  if (!flag.empty()) return slb::parse_output_format(flag);
  return from_config.value_or(slb::OutputFormat::Markdown);
}

int run_verify(const std::string& level, double dg_constant, std::uint64_t seed) {
  slb::VerifyOptions opt;
  opt.level = level == "full" ? slb::CorpusLevel::Full : slb::CorpusLevel::Quick;
  opt.dg_constant = dg_constant;
  opt.seed = seed;
  const auto results = slb::run_verify(opt);
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (r.status == slb::CheckStatus::Fail) ++failed;
    std::printf("%-12s %-26s %7.2fs  %s\n", slb::to_string(r.status).c_str(), r.name.c_str(), r.seconds,
                r.detail.c_str());
  }
  std::printf("%zu checks, %zu failed\n", results.size(), failed);
  return failed ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stop-loss distance bounds for binomial approximation of portfolio losses"};
  app.require_subcommand(1);

  std::string format;
  auto* compare = app.add_subcommand("compare", "bounds on the built-in portfolio prefixes n = 10, ..., 100");
  compare->add_option("-f,--format", format, "csv | markdown | json");

  Overrides bounds_opts;
  auto* bounds = app.add_subcommand("bounds", "bound report for a portfolio");
  add_run_options(bounds, bounds_opts);
  bounds->add_option("--p-chosen", bounds_opts.p_chosen, "p for the chosen-p bound");
  bounds->add_flag("--monte-carlo", bounds_opts.monte_carlo, "estimate the dependence terms by sampling");

  Overrides price_opts;
  auto* price = app.add_subcommand("price", "expected tranche losses with certified brackets");
  add_run_options(price, price_opts);
  price->add_flag("--monte-carlo", price_opts.monte_carlo, "estimate the dependence terms by sampling");

  Overrides dsl_opts;
  std::string against = "binomial";
  auto* dsl = app.add_subcommand("exact-dsl", "exact stop-loss distance curve");
  add_run_options(dsl, dsl_opts);
  dsl->add_option("--against", against, "binomial | poisson")->check(CLI::IsMember({"binomial", "poisson"}));

  std::string level = "quick";
  double dg_constant = 2.0;
  std::uint64_t verify_seed = slb::VerifyOptions{}.seed;
  auto* verify = app.add_subcommand("verify", "property and oracle checks");
  verify->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", verify_seed, "seed for randomized probes");
  verify->add_option("--mutate-dg-constant", dg_constant)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*compare) {
      std::cout << slb::render_comparison(slb::compute_comparison(), format_of(format, std::nullopt));
    } else if (*bounds) {
      const auto cfg = load(bounds_opts);
      const auto fmt = format_of(bounds_opts.format, cfg.format);
      std::cout << slb::render_report(slb::compile_report(cfg.model, cfg.options), fmt);
    } else if (*price) {
      const auto cfg = load(price_opts);
      const auto fmt = format_of(price_opts.format, cfg.format);
      if (cfg.tranches.empty()) throw slb::ParseError("config: no tranches to price");
      const auto report = slb::compile_report(cfg.model, cfg.options);
      std::cout << slb::render_prices(slb::price_tranches(cfg, report), report, fmt);
    } else if (*dsl) {
      const auto cfg = load(dsl_opts);
      const auto fmt = format_of(dsl_opts.format, cfg.format);
      const auto target = against == "poisson" ? slb::DslTarget::Poisson : slb::DslTarget::Binomial;
      std::cout << slb::render_dsl(slb::exact_dsl(cfg, target), fmt);
    } else if (*verify) {
      return run_verify(level, dg_constant, verify_seed);
    }
  } catch (const slb::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const slb::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const slb::FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kFit;
  } catch (const slb::SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kSize;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
