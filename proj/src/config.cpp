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

#include "slb/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "slb/errors.hpp"

namespace slb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("config: " + where + ": " + what);
}

std::vector<double> parse_p(const json& j, std::size_t n) {
  std::vector<double> p;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) fail("p", "entries must be numbers");
      p.push_back(v.get<double>());
    }
  } else if (j.is_object() && j.contains("blocks")) {
    for (const auto& b : j.at("blocks")) {
      if (!b.contains("count") || !b.contains("p")) fail("p.blocks", "each block needs count and p");
      if (!b.at("count").is_number_integer() || b.at("count").get<long long>() < 0) {
        fail("p.blocks", "count must be a non-negative integer");
      }
      if (!b.at("p").is_number()) fail("p.blocks", "p must be a number");
      p.insert(p.end(), b.at("count").get<std::size_t>(), b.at("p").get<double>());
    }
  } else {
    fail("p", "expected a list or {\"blocks\": [...]}");
  }
  if (p.size() != n) {
    std::ostringstream os;
    os << "has " << p.size() << " entries but n = " << n;
    fail("p", os.str());
  }
  return p;
}

std::vector<int> parse_index_set(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of 1-based indices");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail(where, "indices must be integers");
    const long long k = v.get<long long>();
    if (k < 1 || k > static_cast<long long>(n)) fail(where, "index out of range 1..n");
    out.push_back(static_cast<int>(k - 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Neighborhood> parse_neighborhoods(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) fail("neighborhoods", "expected \"auto\" or one {A, B} entry per index");
  std::vector<Neighborhood> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("A") || !e.contains("B")) fail("neighborhoods", "entries need A and B");
    const std::string where = "neighborhoods[" + std::to_string(i + 1) + "]";
    out.push_back({parse_index_set(e.at("A"), n, where + ".A"), parse_index_set(e.at("B"), n, where + ".B")});
  }
  return out;
}

PortfolioModel parse_model(const json& doc) {
  if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 1) {
    fail("n", "must be a positive integer");
  }
  const auto n = doc.at("n").get<std::size_t>();
  if (!doc.contains("p")) fail("p", "missing");
  auto p = parse_p(doc.at("p"), n);

  const json law = doc.value("law", json("independent"));
  const json hoods = doc.value("neighborhoods", json("auto"));
  const bool auto_hoods = hoods.is_string() && hoods.get<std::string>() == "auto";
  if (!auto_hoods && !hoods.is_array()) fail("neighborhoods", "expected \"auto\" or a list");

  if (law.is_string() && law.get<std::string>() == "independent") {
    if (!auto_hoods) fail("neighborhoods", "independent portfolios use A_i = B_i = {i}; give \"auto\"");
    return PortfolioModel::independent(std::move(p));
  }
  if (law.is_object() && law.contains("latent_one_dependent")) {
    const auto& spec = law.at("latent_one_dependent");
    if (!spec.contains("theta") || !spec.at("theta").is_number()) fail("law.latent_one_dependent", "theta missing");
    if (!auto_hoods) fail("neighborhoods", "latent one-dependent portfolios fix A_i, B_i; give \"auto\"");
    return PortfolioModel::latent_one_dependent(std::move(p), spec.at("theta").get<double>());
  }
  if (law.is_object() && law.contains("explicit_joint")) {
    const auto& spec = law.at("explicit_joint");
    if (!spec.contains("table") || !spec.at("table").is_array()) fail("law.explicit_joint", "table missing");
    std::vector<double> table;
    for (const auto& v : spec.at("table")) {
      if (!v.is_number()) fail("law.explicit_joint.table", "entries must be numbers");
      table.push_back(v.get<double>());
    }
    return PortfolioModel::explicit_joint(std::move(p), std::move(table),
                                          auto_hoods ? std::vector<Neighborhood>{} : parse_neighborhoods(hoods, n));
  }
  fail("law", "expected \"independent\", {\"latent_one_dependent\": ...} or {\"explicit_joint\": ...}");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config: " + path.string() + ": " + e.what());
  }
}

PortfolioModel parse_portfolio(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.contains("portfolio")) return parse_model(doc);
  for (const char* key : {"n", "p", "law", "neighborhoods"}) {
    if (doc.contains(key)) fail("portfolio", std::string("give the portfolio inline or under \"portfolio\", not both (") + key + ")");
  }
  const auto& src = doc.at("portfolio");
  if (src.is_string()) {
    std::filesystem::path path(src.get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    const json sub = read_json(path);
    if (!sub.is_object() || sub.contains("portfolio")) fail("portfolio", path.string() + ": expected a model object");
    return parse_model(sub);
  }
  if (src.is_object()) return parse_model(src);
  fail("portfolio", "expected an object or a file path");
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("config: top level must be an object");
  try {
    RunConfig cfg{doc.value("name", std::string{}), parse_portfolio(doc, base_dir), {}, {}, {}};
    if (doc.contains("tranches")) {
      for (const auto& t : doc.at("tranches")) {
        TrancheSpec s;
        if (!t.contains("R") || !t.contains("z_star")) fail("tranches", "entries need R and z_star");
        s.recovery = t.at("R").get<double>();
        s.z_star = t.at("z_star").get<double>();
        s.label = t.value("label", std::string{});
        s.validate();
        cfg.tranches.push_back(std::move(s));
      }
    }
    if (doc.contains("options")) {
      const auto& o = doc.at("options");
      if (o.contains("seed")) cfg.options.seed = o.at("seed").get<std::uint64_t>();
      if (o.contains("samples")) {
        cfg.options.mc_samples = o.at("samples").get<std::size_t>();
        if (cfg.options.mc_samples < 1000) fail("options.samples", "must be at least 1000");
      }
      if (o.contains("p_chosen")) {
        cfg.options.p_chosen = o.at("p_chosen").get<double>();
        if (!(*cfg.options.p_chosen > 0.0 && *cfg.options.p_chosen < 1.0)) fail("options.p_chosen", "must lie in (0, 1)");
      }
      if (o.contains("monte_carlo")) cfg.options.force_monte_carlo = o.at("monte_carlo").get<bool>();
      if (o.contains("exact")) cfg.options.compute_exact = o.at("exact").get<bool>();
      if (o.contains("max_enumeration_n")) cfg.options.limits.max_table_n = o.at("max_enumeration_n").get<int>();
      if (o.contains("format")) cfg.format = parse_output_format(o.at("format").get<std::string>());
    }
    return cfg;
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: invalid model: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json(path), path.parent_path());
}

json model_to_json(const PortfolioModel& model) {
  json j;
  j["n"] = model.n();
  j["p"] = std::vector<double>(model.p_list().begin(), model.p_list().end());
  switch (model.kind()) {
    case LawKind::Independent:
      j["law"] = "independent";
      break;
    case LawKind::LatentOneDependent:
      j["law"] = {{"latent_one_dependent", {{"theta", std::get<LatentOneDependentLaw>(model.law()).theta}}}};
      break;
    case LawKind::ExplicitJoint:
      j["law"] = {{"explicit_joint", {{"table", std::get<ExplicitJointLaw>(model.law()).table}}}};
      break;
    case LawKind::SamplerOnly:
      throw ApplicabilityError("sampler-only models have no JSON form");
  }
  if (model.kind() == LawKind::ExplicitJoint) {
    json hoods = json::array();
    for (const auto& h : model.neighborhoods()) {
      json a = json::array(), b = json::array();
      for (int v : h.a) a.push_back(v + 1);
      for (int v : h.b) b.push_back(v + 1);
      hoods.push_back({{"A", a}, {"B", b}});
    }
    j["neighborhoods"] = hoods;
  } else {
    j["neighborhoods"] = "auto";
  }
  return j;
}

}  // namespace slb
