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

// Subcommand bodies, kept apart from argument parsing so tests can drive them
// directly. Every command writes its artifacts plus config.resolved.json into
// config.output_dir.

#ifndef HSID_TOOLS_COMMANDS_HPP_
#define HSID_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hsid/model.hpp"
#include "hsid/structure.hpp"
#include "hsid/validate.hpp"
#include "run_config.hpp"

namespace hsid::cli {

inline constexpr const char* kResolvedConfigFile = "config.resolved.json";

// One series file per configured input, named <input>.csv.
std::vector<std::filesystem::path> cmd_excite(const RunConfig& config);

struct IdentifyResult {
  MimoHammersteinModel model;
  std::vector<StructureSearchResult> searches;  // empty with fixed orders
  ValidationReport validation;
  bool validated = false;
};

// preprocess -> delays -> structure search -> estimate -> validate. Writes
// model.json, structure_report.txt, validation_report.txt and
// validation_trace.txt. Failures are rethrown with the stage in the message.
IdentifyResult cmd_identify(const RunConfig& config,
                            const std::filesystem::path& dataset);

// Free-run simulation of `model` driven by one series file per model input,
// in model input order. Writes simulated.csv in the dataset format with
// inputs and outputs in physical units; simulation.noise_sigma adds white
// Gaussian noise to the outputs.
std::filesystem::path cmd_simulate(const RunConfig& config,
                                   const std::filesystem::path& model,
                                   const std::vector<std::filesystem::path>& inputs);

// Evaluates `model` on `dataset`. The first validation.n_train samples only
// warm the model up; n_train = 0 evaluates the whole record. Writes
// validation_report.txt and validation_trace.txt.
ValidationReport cmd_validate(const RunConfig& config,
                              const std::filesystem::path& model,
                              const std::filesystem::path& dataset);

// Writes <name>.json for a built-in model.
std::filesystem::path cmd_preset(const RunConfig& config, const std::string& name);

}  // namespace hsid::cli

#endif  // HSID_TOOLS_COMMANDS_HPP_
