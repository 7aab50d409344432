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

#include "slb/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slb/errors.hpp"

namespace slb {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "markdown" || text == "md") return OutputFormat::Markdown;
  if (text == "json") return OutputFormat::Json;
  throw ParseError("unknown output format '" + std::string(text) + "' (csv, markdown, json)");
}

std::string human_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string exact_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string Table::markdown() const {
  std::ostringstream os;
  std::vector<std::string> tiny;
  os << '|';
  for (const auto& h : header_) os << ' ' << h << " |";
  os << "\n|";
  for (std::size_t c = 0; c < header_.size(); ++c) os << " --- |";
  os << '\n';
  for (const auto& row : rows_) {
    os << '|';
    for (const auto& cell : row) {
      os << ' ';
      if (const auto* s = std::get_if<std::string>(&cell)) {
        os << *s;
      } else if (const auto* d = std::get_if<double>(&cell)) {
        if (*d != 0.0 && std::abs(*d) < kDisplayZero) {
          tiny.push_back(human_number(*d));
          os << "0[^" << tiny.size() << ']';
        } else {
          os << human_number(*d);
        }
      } else {
        os << '-';
      }
      os << " |";
    }
    os << '\n';
  }
  if (!tiny.empty() || !notes_.empty()) os << '\n';
  for (std::size_t k = 0; k < tiny.size(); ++k) {
    os << "[^" << k + 1 << "]: computed value " << tiny[k] << ", below 1e-12 and shown as 0\n";
  }
  for (const auto& n : notes_) os << n << '\n';
  return os.str();
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < header_.size(); ++c) os << (c ? "," : "") << csv_escape(header_[c]);
  os << "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (const auto* s = std::get_if<std::string>(&row[c])) {
        os << csv_escape(*s);
      } else if (const auto* d = std::get_if<double>(&row[c])) {
        os << exact_number(*d);
      }
    }
    os << "\r\n";
  }
  return os.str();
}

std::string Table::render(OutputFormat format) const {
  if (format == OutputFormat::Csv) return csv();
  if (format == OutputFormat::Markdown) return markdown();
  throw ApplicabilityError("Table::render: json output is produced from the data, not the table");
}

json params_to_json(const BinomialParams& bp) {
  return {{"alpha", bp.alpha}, {"p", bp.p}, {"delta", bp.delta}};
}

BinomialParams params_from_json(const json& j) {
  return BinomialParams::make(j.at("alpha").get<long long>(), j.at("p").get<double>(), j.at("delta").get<double>());
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

template <typename E>
E enum_from(const std::string& s, std::initializer_list<E> all) {
  for (E e : all) {
    if (to_string(e) == s) return e;
  }
  throw ParseError("report: unknown label '" + s + "'");
}

}  // namespace

json report_to_json(const BoundReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name},
                       {"value", e.value},
                       {"se", e.se},
                       {"applicable", e.applicable},
                       {"certified", e.certified()},
                       {"clamped", e.clamped},
                       {"raw", e.raw},
                       {"mode", to_string(e.mode)},
                       {"family", to_string(e.family)},
                       {"params", e.params ? params_to_json(*e.params) : json(nullptr)},
                       {"exact_dsl", optional_number(e.exact_dsl)},
                       {"note", e.note}});
  }
  json best = nullptr;
  if (!r.best_name.empty()) {
    best = {{"name", r.best_name}, {"value", r.best_value}, {"se", r.best_se}, {"certified", r.best_certified}};
  }
  return {{"fitted", r.fitted ? params_to_json(*r.fitted) : json(nullptr)},
          {"fitted_family", to_string(r.fitted_family)},
          {"poisson_lambda", r.poisson_lambda},
          {"exact_dsl", optional_number(r.exact_dsl)},
          {"best", best},
          {"terms_mode", to_string(r.terms_mode)},
          {"fallback_strata", r.fallback_strata},
          {"errors", r.errors},
          {"entries", entries}};
}

BoundReport report_from_json(const json& j) {
  const std::initializer_list<IngredientMode> modes{IngredientMode::Exact, IngredientMode::MonteCarlo, IngredientMode::ClosedForm};
  const std::initializer_list<ParamFamily> families{ParamFamily::AlphaN, ParamFamily::MomentMatched, ParamFamily::Chosen,
                             ParamFamily::Poisson};
  BoundReport r;
  try {
    if (!j.at("fitted").is_null()) r.fitted = params_from_json(j.at("fitted"));
    r.fitted_family = enum_from(j.at("fitted_family").get<std::string>(), families);
    r.poisson_lambda = j.at("poisson_lambda").get<double>();
    r.exact_dsl = read_optional(j, "exact_dsl");
    if (!j.at("best").is_null()) {
      const auto& b = j.at("best");
      r.best_name = b.at("name").get<std::string>();
      r.best_value = b.at("value").get<double>();
      r.best_se = b.at("se").get<double>();
      r.best_certified = b.at("certified").get<bool>();
    }
    r.terms_mode = enum_from(j.at("terms_mode").get<std::string>(), modes);
    r.fallback_strata = j.at("fallback_strata").get<std::size_t>();
    r.errors = j.at("errors").get<std::vector<std::string>>();
    for (const auto& je : j.at("entries")) {
      BoundEntry e;
      e.name = je.at("name").get<std::string>();
      e.value = je.at("value").get<double>();
      e.se = je.at("se").get<double>();
      e.applicable = je.at("applicable").get<bool>();
      e.clamped = je.at("clamped").get<bool>();
      e.raw = je.at("raw").get<double>();
      e.mode = enum_from(je.at("mode").get<std::string>(), modes);
      e.family = enum_from(je.at("family").get<std::string>(), families);
      if (!je.at("params").is_null()) e.params = params_from_json(je.at("params"));
      e.exact_dsl = read_optional(je, "exact_dsl");
      e.note = je.at("note").get<std::string>();
      r.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

namespace {

bool same_params(const std::optional<BinomialParams>& a, const std::optional<BinomialParams>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->alpha == b->alpha && a->p == b->p && a->delta == b->delta);
}

}  // namespace

bool operator==(const BoundEntry& a, const BoundEntry& b) {
  return a.name == b.name && a.value == b.value && a.se == b.se && a.applicable == b.applicable &&
         a.clamped == b.clamped && a.raw == b.raw && a.mode == b.mode && a.family == b.family &&
         same_params(a.params, b.params) && a.exact_dsl == b.exact_dsl && a.note == b.note;
}

bool operator==(const BoundReport& a, const BoundReport& b) {
  return same_params(a.fitted, b.fitted) && a.fitted_family == b.fitted_family &&
         a.poisson_lambda == b.poisson_lambda && a.exact_dsl == b.exact_dsl && a.best_name == b.best_name &&
         a.best_value == b.best_value && a.best_se == b.best_se && a.best_certified == b.best_certified &&
         a.terms_mode == b.terms_mode && a.fallback_strata == b.fallback_strata && a.errors == b.errors &&
         a.entries == b.entries;
}

}  // namespace slb
