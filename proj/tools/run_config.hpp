// Copyright 2026 The hsid Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration shared by every subcommand. Stored as JSON; any field may
// be omitted and takes the default listed in docs/config.md.

#ifndef HSID_TOOLS_RUN_CONFIG_HPP_
#define HSID_TOOLS_RUN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hsid/estimate.hpp"
#include "hsid/excitation.hpp"
#include "hsid/preprocess.hpp"
#include "hsid/structure.hpp"
#include "hsid/validate.hpp"

namespace hsid::cli {

struct ExcitationInput {
  std::string name;
  std::string unit;
  AmplitudeGrid grid;
  double operating_point = 0.0;
};

struct ExcitationConfig {
  std::size_t length = 1070;
  std::uint64_t seed = 12345;
  std::size_t hold = 1;
  double sample_period = 1.0;
  std::vector<ExcitationInput> inputs;
};

enum class EstimationMethod { kBatch, kRls };

struct EstimationConfig {
  EstimationMethod method = EstimationMethod::kBatch;
  double alpha_sq = kDefaultAlphaSq;
  // Skips the structure search when set.
  std::optional<StructureOrders> orders;
};

struct ValidationConfig {
  std::size_t n_train = 1000;
  bool one_step_ahead = false;
  StdMode std_mode = StdMode::kPopulation;
};

struct SimulationConfig {
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 1;
};

struct RunConfig {
  ExcitationConfig excitation;
  PreprocessConfig preprocess;
  SearchOptions search;
  EstimationConfig estimation;
  ValidationConfig validation;
  SimulationConfig simulation;
  std::filesystem::path output_dir = ".";

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// Defaults: the I_p {130..170 step 2} A and V_f {4..10 step 1} cm/s grids
// around 150 A and 7 cm/s, N = 1070, 1000 training samples.
RunConfig default_config();

// Overlays `text` on the defaults. Unknown keys are rejected.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved JSON form. Parsing it back yields the same configuration.
std::string serialize_config(const RunConfig& config);

}  // namespace hsid::cli

#endif  // HSID_TOOLS_RUN_CONFIG_HPP_
