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

// hsid: excitation design, identification and validation of multivariable
// Hammerstein models.

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "hsid/model.hpp"
#include "run_config.hpp"

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hsid::cli;

  CLI::App app{"Multivariable Hammerstein identification toolkit", "hsid"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Overrides excitation.seed and simulation.noise_seed");
  app.add_option("--output-dir", output_dir, "Overrides paths.output_dir");

  auto* excite = app.add_subcommand("excite", "Write one pseudo-random grid series per input");

  auto* identify = app.add_subcommand("identify", "Identify a model from a dataset");
  std::string dataset;
  identify->add_option("dataset", dataset, "Dataset file")->required();

  auto* simulate = app.add_subcommand("simulate", "Free-run a model on input series");
  std::string model;
  std::vector<std::string> inputs;
  simulate->add_option("--model", model, "Model file")->required();
  simulate->add_option("inputs", inputs, "One series file per model input, in order")
      ->required();

  auto* validate = app.add_subcommand("validate", "Evaluate a model on a dataset");
  bool one_step = false;
  validate->add_option("--model", model, "Model file")->required();
  validate->add_option("dataset", dataset, "Dataset file")->required();
  validate->add_flag("--one-step-ahead", one_step, "Feed measured outputs back");

  auto* preset = app.add_subcommand("preset", "Export a built-in model");
  std::string preset_name = "paper-gtaw";
  bool list = false;
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("--list", list, "Print the available presets");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
    if (seed) {
      config.excitation.seed = *seed;
      config.simulation.noise_seed = *seed;
    }
    if (output_dir) config.output_dir = *output_dir;
    if (one_step) config.validation.one_step_ahead = true;

    if (excite->parsed()) {
      for (const auto& path : cmd_excite(config)) std::cout << path.string() << "\n";
    } else if (identify->parsed()) {
      const auto result = cmd_identify(config, dataset);
      std::cout << (config.output_dir / "model.json").string() << "\n";
      if (result.validated) {
        std::cout << format_validation_summary(result.validation);
      }
    } else if (simulate->parsed()) {
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      std::cout << cmd_simulate(config, model, paths).string() << "\n";
    } else if (validate->parsed()) {
      std::cout << format_validation_summary(cmd_validate(config, model, dataset));
    } else if (preset->parsed()) {
      if (list) {
        std::cout << join_names(hsid::preset_names()) << "\n";
      } else {
        std::cout << cmd_preset(config, preset_name).string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "hsid: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
