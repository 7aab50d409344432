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

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "slb/bounds.hpp"

namespace slb {

enum class OutputFormat { Csv, Markdown, Json };

OutputFormat parse_output_format(std::string_view text);

/// Magnitudes below this print as 0 in human output, with a footnote.
inline constexpr double kDisplayZero = 1e-12;

/// Six significant figures.
std::string human_number(double v);

/// Shortest text that reads back to the same double.
std::string exact_number(double v);

/// A rectangular table of text and numeric cells. Markdown shows numbers
/// with six significant figures; csv keeps full precision.
class Table {
 public:
  using Cell = std::variant<std::monostate, std::string, double>;

  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row) { rows_.push_back(std::move(row)); }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  std::string markdown() const;
  std::string csv() const;
  std::string render(OutputFormat format) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::string> notes_;
};

std::string csv_escape(std::string_view field);

nlohmann::json params_to_json(const BinomialParams& bp);
BinomialParams params_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const BoundReport& report);
BoundReport report_from_json(const nlohmann::json& j);

bool operator==(const BoundEntry& a, const BoundEntry& b);
bool operator==(const BoundReport& a, const BoundReport& b);

}  // namespace slb
