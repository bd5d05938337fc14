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

#include "commands.hpp"

#include <sstream>

#include "hsid/error.hpp"
#include "hsid/estimate.hpp"
#include "hsid/excitation.hpp"
#include "hsid/persistence.hpp"
#include "hsid/preprocess.hpp"

namespace hsid::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare_output_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error("cannot create output directory '" + config.output_dir.string() +
                "': " + ec.message());
  }
  write_text_file(config.output_dir / kResolvedConfigFile, serialize_config(config));
  return config.output_dir;
}

// Runs `body`, prefixing any library error with the pipeline stage.
template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const RankDeficientError& e) {
    throw RankDeficientError(name + ": " + e.what(), e.rank(), e.columns(),
                             e.offending_columns());
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what(), e.line());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(name + ": " + e.what());
  } catch (const Error& e) {
    throw Error(name + ": " + e.what());
  }
}

std::string orders_text(const OutputOrders& o) {
  std::ostringstream ss;
  ss << "n=" << o.n;
  for (const auto& c : o.inputs) {
    ss << " [d=" << c.delay << " m=" << c.m << " p=" << c.p << "]";
  }
  return ss.str();
}

OutputEstimate estimate_rls(const Dataset& data, const OutputOrders& orders,
                            std::size_t output, double alpha_sq) {
  const auto problem = build_regressor(data, orders, output);
  const auto state = rls_fit(problem, alpha_sq);
  OutputEstimate est;
  est.orders = orders;
  est.solution.theta = state.theta;
  est.solution.rank = static_cast<std::size_t>(problem.H.cols());
  est.solution.loss = loss_J(problem, state.theta);
  est.parameters = separate_parameters(state.theta, orders);
  return est;
}

void write_validation(const fs::path& dir, const ValidationReport& report) {
  write_text_file(dir / "validation_report.txt", format_validation_summary(report));
  write_text_file(dir / "validation_trace.txt", format_validation_trace(report));
}

ValidationOptions validation_options(const RunConfig& config) {
  return {config.validation.one_step_ahead, config.validation.std_mode};
}

}  // namespace

std::vector<fs::path> cmd_excite(const RunConfig& config) {
  config.validate();
  if (config.excitation.inputs.empty()) {
    throw InvalidArgument("excite: no excitation inputs configured");
  }
  const auto dir = prepare_output_dir(config);
  std::vector<fs::path> written;
  for (std::size_t j = 0; j < config.excitation.inputs.size(); ++j) {
    const auto& in = config.excitation.inputs[j];
    NamedSeries series{in.name,
                       generate_excitation(in.grid, config.excitation.length,
                                           excitation_stream(config.excitation.seed, j),
                                           config.excitation.hold)};
    const auto path = dir / (in.name + ".csv");
    save_series(series, path);
    written.push_back(path);
  }
  return written;
}

IdentifyResult cmd_identify(const RunConfig& config, const fs::path& dataset_path) {
  config.validate();
  const Dataset raw = stage("load dataset", [&] { return load_dataset(dataset_path); });

  const std::size_t n_train = config.validation.n_train;
  const bool hold_out = n_train > 0;
  if (hold_out && n_train >= raw.size()) {
    throw InvalidArgument("split: dataset has " + std::to_string(raw.size()) +
                          " samples but validation.n_train = " +
                          std::to_string(n_train) +
                          " leaves no test samples (0 disables hold-out)");
  }
  const DatasetSplit split =
      hold_out ? split_dataset(raw, n_train) : DatasetSplit{raw, Dataset{}};

  const auto pre = stage("preprocess", [&] { return preprocess(split.train, config.preprocess); });
  const Dataset& data = pre.data;

  IdentifyResult result;
  StructureOrders orders;
  if (config.estimation.orders) {
    orders = *config.estimation.orders;
    if (orders.outputs.size() != data.n_outputs()) {
      throw InvalidArgument("structure: estimation.orders lists " +
                            std::to_string(orders.outputs.size()) +
                            " outputs but the dataset has " +
                            std::to_string(data.n_outputs()));
    }
    for (const auto& o : orders.outputs) {
      if (o.inputs.size() != data.n_inputs()) {
        throw InvalidArgument("structure: estimation.orders lists " +
                              std::to_string(o.inputs.size()) +
                              " inputs but the dataset has " +
                              std::to_string(data.n_inputs()));
      }
    }
  } else {
    for (std::size_t s = 0; s < data.n_outputs(); ++s) {
      auto search = stage("structure search (output " + data.outputs[s].name + ")",
                          [&] { return select_structure(data, s, config.search); });
      orders.outputs.push_back(search.selected);
      result.searches.push_back(std::move(search));
    }
  }

  std::vector<OutputEstimate> estimates;
  for (std::size_t s = 0; s < data.n_outputs(); ++s) {
    estimates.push_back(stage("estimate (output " + data.outputs[s].name + ")", [&] {
      return config.estimation.method == EstimationMethod::kRls
                 ? estimate_rls(data, orders.outputs[s], s, config.estimation.alpha_sq)
                 : estimate_output(data, orders.outputs[s], s);
    }));
  }
  result.model = stage("assemble", [&] {
    return assemble_model(data, estimates, pre.input_offsets, pre.output_offsets);
  });
  result.model.metadata["source_dataset"] = dataset_path.filename().string();
  result.model.metadata["estimation_method"] =
      config.estimation.method == EstimationMethod::kRls ? "rls" : "batch";
  result.model.metadata["training_samples"] = std::to_string(split.train.size());
  for (std::size_t s = 0; s < data.n_outputs(); ++s) {
    result.model.metadata["orders." + data.outputs[s].name] =
        orders_text(orders.outputs[s]);
  }

  if (hold_out) {
    result.validation = stage("validate", [&] {
      return evaluate(result.model, split.train, split.test, validation_options(config));
    });
    result.validated = true;
  }

  const auto dir = prepare_output_dir(config);
  save_model(result.model, dir / "model.json");
  std::string report;
  if (result.searches.empty()) {
    report = "structure search skipped: orders fixed by configuration\n";
    for (std::size_t s = 0; s < data.n_outputs(); ++s) {
      report += data.outputs[s].name + ": " + orders_text(orders.outputs[s]) + "\n";
    }
  } else {
    for (const auto& search : result.searches) {
      report += format_structure_report(data, search);
      report += "\n";
    }
  }
  write_text_file(dir / "structure_report.txt", report);
  if (result.validated) write_validation(dir, result.validation);
  return result;
}

fs::path cmd_simulate(const RunConfig& config, const fs::path& model_path,
                      const std::vector<fs::path>& input_paths) {
  config.validate();
  const auto model = stage("load model", [&] { return load_model(model_path); });
  if (input_paths.size() != model.n_inputs()) {
    throw InvalidArgument("simulate: model has " + std::to_string(model.n_inputs()) +
                          " inputs but " + std::to_string(input_paths.size()) +
                          " input files were given");
  }
  Dataset data;
  for (std::size_t j = 0; j < input_paths.size(); ++j) {
    if (!fs::exists(input_paths[j])) {
      throw Error("simulate: input file '" + input_paths[j].string() + "' does not exist");
    }
    auto series = stage("load input", [&] { return load_series(input_paths[j]); });
    if (series.name != model.inputs[j].name) {
      throw InvalidArgument("simulate: input file '" + input_paths[j].string() +
                            "' holds '" + series.name + "' but model input " +
                            std::to_string(j) + " is '" + model.inputs[j].name + "'");
    }
    if (j > 0 && series.values.size() != data.inputs[0].values.size()) {
      throw InvalidArgument("simulate: input files differ in length");
    }
    data.inputs.push_back({model.inputs[j].name, model.inputs[j].unit,
                           model.inputs[j].operating_point, std::move(series.values)});
  }
  data.sample_period = config.excitation.sample_period;
  const std::size_t len = data.inputs[0].values.size();
  for (const auto& out : model.outputs) {
    data.outputs.push_back({out.name, out.unit, out.operating_point, Series(len, 0.0)});
  }
  const auto predicted = predict(model, data);
  for (std::size_t s = 0; s < model.n_outputs(); ++s) {
    data.outputs[s].values = predicted[s];
    if (config.simulation.noise_sigma > 0.0) {
      const auto noise = gaussian_noise(len, config.simulation.noise_sigma,
                                        config.simulation.noise_seed + s);
      for (std::size_t k = 0; k < len; ++k) data.outputs[s].values[k] += noise[k];
    }
  }
  const auto dir = prepare_output_dir(config);
  const auto path = dir / "simulated.csv";
  save_dataset(data, path);
  return path;
}

ValidationReport cmd_validate(const RunConfig& config, const fs::path& model_path,
                              const fs::path& dataset_path) {
  config.validate();
  const auto model = stage("load model", [&] { return load_model(model_path); });
  const auto data = stage("load dataset", [&] { return load_dataset(dataset_path); });
  const std::size_t n_train = config.validation.n_train;
  if (n_train >= data.size()) {
    throw InvalidArgument("validate: dataset has " + std::to_string(data.size()) +
                          " samples but validation.n_train = " +
                          std::to_string(n_train) +
                          " leaves no test samples (0 evaluates the whole record)");
  }
  const auto report = stage("validate", [&] {
    if (n_train == 0) return evaluate(model, data, validation_options(config));
    const auto split = split_dataset(data, n_train);
    return evaluate(model, split.train, split.test, validation_options(config));
  });
  write_validation(prepare_output_dir(config), report);
  return report;
}

fs::path cmd_preset(const RunConfig& config, const std::string& name) {
  const auto model = preset_by_name(name);
  const auto dir = prepare_output_dir(config);
  const auto path = dir / (name + ".json");
  save_model(model, path);
  return path;
}

}  // namespace hsid::cli
