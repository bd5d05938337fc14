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

#include "run_config.hpp"

#include <json.hpp>

#include "hsid/error.hpp"
#include "hsid/persistence.hpp"

namespace hsid::cli {

using nlohmann::ordered_json;

namespace {

std::string std_mode_name(StdMode mode) {
  return mode == StdMode::kSample ? "sample" : "population";
}

std::string method_name(EstimationMethod method) {
  return method == EstimationMethod::kRls ? "rls" : "batch";
}

ordered_json orders_json(const StructureOrders& orders) {
  ordered_json out = ordered_json::array();
  for (const auto& o : orders.outputs) {
    ordered_json oj;
    oj["n"] = o.n;
    oj["inputs"] = ordered_json::array();
    for (const auto& c : o.inputs) {
      oj["inputs"].push_back({{"d", c.delay}, {"m", c.m}, {"p", c.p}});
    }
    out.push_back(std::move(oj));
  }
  return out;
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  auto& ex = j["excitation"];
  ex["length"] = c.excitation.length;
  ex["seed"] = c.excitation.seed;
  ex["hold"] = c.excitation.hold;
  ex["sample_period"] = c.excitation.sample_period;
  ex["inputs"] = ordered_json::array();
  for (const auto& in : c.excitation.inputs) {
    ex["inputs"].push_back({{"name", in.name},
                            {"unit", in.unit},
                            {"low", in.grid.low},
                            {"high", in.grid.high},
                            {"step", in.grid.step},
                            {"operating_point", in.operating_point}});
  }
  auto& pp = j["preprocess"];
  pp["median_window"] = c.preprocess.median_window;
  pp["filter_inputs"] = c.preprocess.filter_inputs;
  pp["filter_outputs"] = c.preprocess.filter_outputs;
  auto& se = j["search"];
  se["n_max"] = c.search.bounds.n_max;
  se["m_max"] = c.search.bounds.m_max;
  se["p_max"] = c.search.bounds.p_max;
  se["max_delay"] = c.search.bounds.max_delay;
  se["plateau_threshold"] = c.search.plateau_threshold;
  se["loss_floor"] = c.search.loss_floor;
  se["max_passes"] = c.search.max_passes;
  se["delays"] = c.search.delays ? ordered_json(*c.search.delays) : ordered_json();
  auto& es = j["estimation"];
  es["method"] = method_name(c.estimation.method);
  es["alpha_sq"] = c.estimation.alpha_sq;
  es["orders"] = c.estimation.orders ? orders_json(*c.estimation.orders) : ordered_json();
  auto& va = j["validation"];
  va["n_train"] = c.validation.n_train;
  va["one_step_ahead"] = c.validation.one_step_ahead;
  va["std_mode"] = std_mode_name(c.validation.std_mode);
  auto& si = j["simulation"];
  si["noise_sigma"] = c.simulation.noise_sigma;
  si["noise_seed"] = c.simulation.noise_seed;
  j["paths"]["output_dir"] = c.output_dir.generic_string();
  return j;
}

[[noreturn]] void bad(const std::string& source, const std::string& path,
                      const std::string& what) {
  throw InvalidArgument(source + ": '" + path + "': " + what);
}

// Rejects keys the defaults do not know. Arrays and nulls are leaves.
void check_keys(const ordered_json& user, const ordered_json& known,
                const std::string& source, const std::string& prefix) {
  if (!known.is_object()) return;
  if (!user.is_object()) bad(source, prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!known.contains(key)) bad(source, path, "unknown key");
    check_keys(value, known.at(key), source, path);
  }
}

void overlay(ordered_json& base, const ordered_json& user) {
  for (const auto& [key, value] : user.items()) {
    if (value.is_object() && base[key].is_object()) {
      overlay(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

struct Reader {
  const std::string& source;

  std::size_t count(const ordered_json& v, const std::string& path) const {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
    bad(source, path, "expected a non-negative integer");
  }
  double number(const ordered_json& v, const std::string& path) const {
    if (!v.is_number()) bad(source, path, "expected a number");
    return v.get<double>();
  }
  bool flag(const ordered_json& v, const std::string& path) const {
    if (!v.is_boolean()) bad(source, path, "expected true or false");
    return v.get<bool>();
  }
  std::string text(const ordered_json& v, const std::string& path) const {
    if (!v.is_string()) bad(source, path, "expected a string");
    return v.get<std::string>();
  }
  const ordered_json& field(const ordered_json& obj, const std::string& key,
                            const std::string& path) const {
    if (!obj.is_object() || !obj.contains(key)) bad(source, path + "." + key, "missing");
    return obj.at(key);
  }
};

RunConfig from_json(const ordered_json& j, const std::string& source) {
  const Reader r{source};
  RunConfig c;
  const auto& ex = j.at("excitation");
  c.excitation.length = r.count(ex.at("length"), "excitation.length");
  c.excitation.seed = r.count(ex.at("seed"), "excitation.seed");
  c.excitation.hold = r.count(ex.at("hold"), "excitation.hold");
  c.excitation.sample_period = r.number(ex.at("sample_period"), "excitation.sample_period");
  const auto& ins = ex.at("inputs");
  if (!ins.is_array()) bad(source, "excitation.inputs", "expected an array");
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const std::string p = "excitation.inputs[" + std::to_string(i) + "]";
    ExcitationInput in;
    in.name = r.text(r.field(ins[i], "name", p), p + ".name");
    in.unit = ins[i].contains("unit") ? r.text(ins[i].at("unit"), p + ".unit") : "";
    in.grid.low = r.number(r.field(ins[i], "low", p), p + ".low");
    in.grid.high = r.number(r.field(ins[i], "high", p), p + ".high");
    in.grid.step = r.number(r.field(ins[i], "step", p), p + ".step");
    in.operating_point =
        r.number(r.field(ins[i], "operating_point", p), p + ".operating_point");
    for (const auto& [key, value] : ins[i].items()) {
      if (key != "name" && key != "unit" && key != "low" && key != "high" &&
          key != "step" && key != "operating_point") {
        bad(source, p + "." + key, "unknown key");
      }
    }
    c.excitation.inputs.push_back(std::move(in));
  }

  const auto& pp = j.at("preprocess");
  c.preprocess.median_window = r.count(pp.at("median_window"), "preprocess.median_window");
  c.preprocess.filter_inputs = r.flag(pp.at("filter_inputs"), "preprocess.filter_inputs");
  c.preprocess.filter_outputs = r.flag(pp.at("filter_outputs"), "preprocess.filter_outputs");

  const auto& se = j.at("search");
  c.search.bounds.n_max = r.count(se.at("n_max"), "search.n_max");
  c.search.bounds.m_max = r.count(se.at("m_max"), "search.m_max");
  c.search.bounds.p_max = r.count(se.at("p_max"), "search.p_max");
  c.search.bounds.max_delay = r.count(se.at("max_delay"), "search.max_delay");
  c.search.plateau_threshold = r.number(se.at("plateau_threshold"), "search.plateau_threshold");
  c.search.loss_floor = r.number(se.at("loss_floor"), "search.loss_floor");
  c.search.max_passes = r.count(se.at("max_passes"), "search.max_passes");
  if (!se.at("delays").is_null()) {
    const auto& d = se.at("delays");
    if (!d.is_array()) bad(source, "search.delays", "expected an array or null");
    std::vector<std::size_t> delays;
    for (std::size_t i = 0; i < d.size(); ++i) {
      delays.push_back(r.count(d[i], "search.delays[" + std::to_string(i) + "]"));
    }
    c.search.delays = std::move(delays);
  }

  const auto& es = j.at("estimation");
  const auto method = r.text(es.at("method"), "estimation.method");
  if (method == "batch") {
    c.estimation.method = EstimationMethod::kBatch;
  } else if (method == "rls") {
    c.estimation.method = EstimationMethod::kRls;
  } else {
    bad(source, "estimation.method", "expected 'batch' or 'rls', found '" + method + "'");
  }
  c.estimation.alpha_sq = r.number(es.at("alpha_sq"), "estimation.alpha_sq");
  if (!es.at("orders").is_null()) {
    const auto& o = es.at("orders");
    if (!o.is_array()) bad(source, "estimation.orders", "expected an array or null");
    StructureOrders orders;
    for (std::size_t s = 0; s < o.size(); ++s) {
      const std::string p = "estimation.orders[" + std::to_string(s) + "]";
      OutputOrders oo;
      oo.n = r.count(r.field(o[s], "n", p), p + ".n");
      const auto& chans = r.field(o[s], "inputs", p);
      if (!chans.is_array()) bad(source, p + ".inputs", "expected an array");
      for (std::size_t i = 0; i < chans.size(); ++i) {
        const std::string q = p + ".inputs[" + std::to_string(i) + "]";
        ChannelOrders co;
        co.delay = r.count(r.field(chans[i], "d", q), q + ".d");
        co.m = r.count(r.field(chans[i], "m", q), q + ".m");
        co.p = r.count(r.field(chans[i], "p", q), q + ".p");
        oo.inputs.push_back(co);
      }
      orders.outputs.push_back(std::move(oo));
    }
    c.estimation.orders = std::move(orders);
  }

  const auto& va = j.at("validation");
  c.validation.n_train = r.count(va.at("n_train"), "validation.n_train");
  c.validation.one_step_ahead = r.flag(va.at("one_step_ahead"), "validation.one_step_ahead");
  const auto mode = r.text(va.at("std_mode"), "validation.std_mode");
  if (mode == "population") {
    c.validation.std_mode = StdMode::kPopulation;
  } else if (mode == "sample") {
    c.validation.std_mode = StdMode::kSample;
  } else {
    bad(source, "validation.std_mode", "expected 'population' or 'sample'");
  }

  const auto& si = j.at("simulation");
  c.simulation.noise_sigma = r.number(si.at("noise_sigma"), "simulation.noise_sigma");
  c.simulation.noise_seed = r.count(si.at("noise_seed"), "simulation.noise_seed");

  c.output_dir = r.text(j.at("paths").at("output_dir"), "paths.output_dir");
  c.validate();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  if (excitation.length == 0) throw InvalidArgument("config: excitation.length must be positive");
  if (excitation.hold == 0) throw InvalidArgument("config: excitation.hold must be positive");
  if (!(excitation.sample_period > 0.0)) {
    throw InvalidArgument("config: excitation.sample_period must be positive");
  }
  make_lcg(excitation.seed);
  for (const auto& in : excitation.inputs) {
    try {
      in.grid.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config: excitation input '" + in.name + "': " + e.what());
    }
  }
  preprocess.validate();
  search.validate();
  if (!(estimation.alpha_sq > 0.0)) {
    throw InvalidArgument("config: estimation.alpha_sq must be positive");
  }
  if (estimation.orders) {
    for (const auto& o : estimation.orders->outputs) o.validate();
  }
  if (!(simulation.noise_sigma >= 0.0)) {
    throw InvalidArgument("config: simulation.noise_sigma must be non-negative");
  }
}

RunConfig default_config() {
  RunConfig c;
  c.excitation.inputs = {
      {"I_p", "A", AmplitudeGrid{130.0, 170.0, 2.0}, 150.0},
      {"V_f", "cm/s", AmplitudeGrid{4.0, 10.0, 1.0}, 7.0},
  };
  return c;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  ordered_json user;
  try {
    user = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(source + ": malformed JSON: " + e.what(), 0);
  }
  ordered_json merged = to_json(default_config());
  check_keys(user, merged, source, "");
  overlay(merged, user);
  return from_json(merged, source);
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string());
}

std::string serialize_config(const RunConfig& config) {
  return to_json(config).dump(2) + "\n";
}

}  // namespace hsid::cli
