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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slb/bounds.hpp"
#include "slb/cdo.hpp"
#include "slb/dependence.hpp"
#include "slb/format.hpp"

namespace slb {

struct RunConfig {
  std::string name;
  PortfolioModel model;
  std::vector<TrancheSpec> tranches;
  BoundOptions options;
  std::optional<OutputFormat> format;
};

/// Parses the run document. The portfolio is either given at top level
/// (n, p, law, neighborhoods) or under "portfolio" as an object or a path
/// resolved against base_dir. Schema problems and invalid model parameters
/// both raise ParseError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Writes a model back in the same schema (explicit neighborhoods are
/// written 1-based).
nlohmann::json model_to_json(const PortfolioModel& model);

}  // namespace slb
