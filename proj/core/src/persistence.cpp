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

#include "hsid/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "hsid/error.hpp"

namespace hsid {

using nlohmann::ordered_json;

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw InvalidArgument("cannot store non-finite value");
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+'; accept it for hand-written files.
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

namespace {

constexpr std::string_view kDatasetMagic = "# hsid-dataset";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Lines without their terminators; a final empty line after the last '\n'
// is dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return lines;
}

void check_label(const std::string& label, const char* what) {
  if (label.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidArgument(std::string("dataset: ") + what + " '" + label +
                          "' may not contain commas or line breaks");
  }
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what, line);
}

}  // namespace

std::string serialize_dataset(const Dataset& data) {
  data.validate();
  std::vector<const Signal*> signals;
  for (const auto& s : data.inputs) signals.push_back(&s);
  for (const auto& s : data.outputs) signals.push_back(&s);

  std::vector<std::string> in_names, out_names, units, ops, header{"index"};
  bool any_op = false;
  for (const auto& s : data.inputs) in_names.push_back(s.name);
  for (const auto& s : data.outputs) out_names.push_back(s.name);
  for (const auto* s : signals) {
    if (s->name.empty()) throw InvalidArgument("dataset: empty signal name");
    check_label(s->name, "signal name");
    check_label(s->unit, "unit");
    header.push_back(s->name);
    units.push_back(s->unit);
    ops.push_back(s->operating_point ? format_number(*s->operating_point) : "");
    any_op = any_op || s->operating_point.has_value();
  }

  std::string out;
  out += std::string(kDatasetMagic) + " " + std::to_string(kDatasetFormatVersion) + "\n";
  out += "# sample_period: " + format_number(data.sample_period) + "\n";
  out += "# inputs: " + join(in_names) + "\n";
  out += "# outputs: " + join(out_names) + "\n";
  out += "# units: " + join(units) + "\n";
  if (any_op) out += "# operating_point: " + join(ops) + "\n";
  out += join(header) + "\n";
  for (std::size_t k = 0; k < data.size(); ++k) {
    out += std::to_string(k);
    for (const auto* s : signals) {
      out += ',';
      out += format_number(s->values[k]);
    }
    out += '\n';
  }
  return out;
}

Dataset parse_dataset(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) fail(source, 0, "empty file, missing dataset header");
  const std::string magic = std::string(kDatasetMagic) + " ";
  if (lines[0].substr(0, magic.size()) != magic) {
    fail(source, 1, "missing header line '" + magic + "<version>'");
  }
  if (lines[0].substr(magic.size()) != std::to_string(kDatasetFormatVersion)) {
    fail(source, 1, "unsupported dataset format version '" +
                        std::string(lines[0].substr(magic.size())) + "'");
  }

  Dataset data;
  std::optional<double> period;
  std::vector<std::string> in_names, out_names;
  std::vector<std::string_view> units, ops;
  bool have_inputs = false, have_outputs = false;
  std::size_t units_line = 0, ops_line = 0;
  std::size_t i = 1;
  for (; i < lines.size() && !lines[i].empty() && lines[i].front() == '#'; ++i) {
    const std::size_t lineno = i + 1;
    const auto body = lines[i].substr(1);
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      fail(source, lineno, "header line without 'key: value'");
    }
    auto trim = [](std::string_view s) {
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
      return s;
    };
    const auto key = trim(body.substr(0, colon));
    const auto value = trim(body.substr(colon + 1));
    auto names = [&](std::vector<std::string>& dst) {
      for (auto part : split(value, ',')) {
        if (part.empty()) fail(source, lineno, "empty signal name");
        dst.emplace_back(part);
      }
    };
    if (key == "sample_period") {
      period = parse_number(value);
      if (!period) fail(source, lineno, "sample period is not a number");
      if (!(*period > 0.0)) {
        fail(source, lineno, "sample period must be positive");
      }
    } else if (key == "inputs") {
      names(in_names);
      have_inputs = true;
    } else if (key == "outputs") {
      names(out_names);
      have_outputs = true;
    } else if (key == "units") {
      units = split(value, ',');
      units_line = lineno;
    } else if (key == "operating_point") {
      ops = split(value, ',');
      ops_line = lineno;
    } else {
      fail(source, lineno, "unknown header key '" + std::string(key) + "'");
    }
  }
  if (!period) fail(source, i, "missing '# sample_period:' header");
  if (!have_inputs || !have_outputs) {
    fail(source, i, "missing '# inputs:' or '# outputs:' header");
  }
  const std::size_t n_signals = in_names.size() + out_names.size();
  if (units_line && units.size() != n_signals) {
    fail(source, units_line, "expected " + std::to_string(n_signals) + " units");
  }
  if (ops_line && ops.size() != n_signals) {
    fail(source, ops_line,
         "expected " + std::to_string(n_signals) + " operating point cells");
  }

  data.sample_period = *period;
  for (std::size_t c = 0; c < n_signals; ++c) {
    Signal s;
    s.name = c < in_names.size() ? in_names[c] : out_names[c - in_names.size()];
    if (units_line) s.unit = std::string(units[c]);
    if (ops_line && !ops[c].empty()) {
      s.operating_point = parse_number(ops[c]);
      if (!s.operating_point) {
        fail(source, ops_line, "operating point for '" + s.name +
                                   "' is not a number");
      }
    }
    (c < in_names.size() ? data.inputs : data.outputs).push_back(std::move(s));
  }

  if (i >= lines.size()) fail(source, i + 1, "missing column header line");
  std::vector<std::string> expected{"index"};
  expected.insert(expected.end(), in_names.begin(), in_names.end());
  expected.insert(expected.end(), out_names.begin(), out_names.end());
  if (lines[i] != join(expected)) {
    fail(source, i + 1, "column header must read '" + join(expected) + "'");
  }
  ++i;

  std::size_t row = 0;
  for (; i < lines.size(); ++i, ++row) {
    const std::size_t lineno = i + 1;
    const std::string where = "data row " + std::to_string(row + 1);
    const auto fields = split(lines[i], ',');
    if (fields.size() != n_signals + 1) {
      fail(source, lineno, where + ": expected " +
                               std::to_string(n_signals + 1) + " fields, found " +
                               std::to_string(fields.size()));
    }
    std::size_t index = 0;
    const auto res = std::from_chars(fields[0].data(),
                                     fields[0].data() + fields[0].size(), index);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size() ||
        index != row) {
      fail(source, lineno, where + ": index must be " + std::to_string(row) +
                               ", found '" + std::string(fields[0]) + "'");
    }
    for (std::size_t c = 0; c < n_signals; ++c) {
      auto& sig = c < in_names.size() ? data.inputs[c]
                                      : data.outputs[c - in_names.size()];
      const auto value = parse_number(fields[c + 1]);
      if (!value) {
        fail(source, lineno, where + ", column '" + sig.name +
                                 "': non-numeric value '" +
                                 std::string(fields[c + 1]) + "'");
      }
      sig.values.push_back(*value);
    }
  }
  if (row == 0) fail(source, i, "no data rows");
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_text_file(path), path.string());
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_text_file(path, serialize_dataset(data));
}

namespace {

constexpr std::string_view kModelSchema = "hsid-model";

ordered_json signal_json(const SignalInfo& s) {
  return {{"name", s.name}, {"unit", s.unit}, {"operating_point", s.operating_point}};
}

void check_finite(const std::vector<double>& xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvalidArgument("model: non-finite coefficient");
  }
}

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& what) {
  throw ParseError(source + ": field '" + field + "': " + what, 0);
}

const ordered_json& require(const ordered_json& obj, const std::string& key,
                            const std::string& path, const std::string& source) {
  if (!obj.is_object() || !obj.contains(key)) {
    field_error(source, path + key, "missing");
  }
  return obj.at(key);
}

std::size_t as_count(const ordered_json& v, const std::string& field,
                     const std::string& source) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    field_error(source, field, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double as_double(const ordered_json& v, const std::string& field,
                 const std::string& source) {
  if (!v.is_number()) field_error(source, field, "expected a number");
  return v.get<double>();
}

std::string as_string(const ordered_json& v, const std::string& field,
                      const std::string& source) {
  if (!v.is_string()) field_error(source, field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_numbers(const ordered_json& v, const std::string& field,
                               const std::string& source) {
  if (!v.is_array()) field_error(source, field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_double(v[i], field + "[" + std::to_string(i) + "]", source));
  }
  return out;
}

std::vector<SignalInfo> as_signals(const ordered_json& v, const std::string& field,
                                   const std::string& source) {
  if (!v.is_array()) field_error(source, field, "expected an array");
  std::vector<SignalInfo> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = field + "[" + std::to_string(i) + "].";
    SignalInfo s;
    s.name = as_string(require(v[i], "name", path, source), path + "name", source);
    s.unit = as_string(require(v[i], "unit", path, source), path + "unit", source);
    s.operating_point =
        as_double(require(v[i], "operating_point", path, source),
                  path + "operating_point", source);
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

std::string serialize_model(const MimoHammersteinModel& model) {
  model.validate();
  ordered_json j;
  j["schema"] = kModelSchema;
  j["version"] = kModelSchemaVersion;
  j["n_inputs"] = model.n_inputs();
  j["n_outputs"] = model.n_outputs();
  j["inputs"] = ordered_json::array();
  for (const auto& s : model.inputs) j["inputs"].push_back(signal_json(s));
  j["outputs"] = ordered_json::array();
  for (const auto& s : model.outputs) j["outputs"].push_back(signal_json(s));
  j["channels"] = ordered_json::array();
  for (std::size_t s = 0; s < model.n_outputs(); ++s) {
    for (std::size_t i = 0; i < model.n_inputs(); ++i) {
      const auto& ch = model.channel(s, i);
      check_finite(ch.nonlinearity.coeffs);
      check_finite(ch.dynamics.a);
      check_finite(ch.dynamics.b);
      ordered_json c;
      c["output"] = s;
      c["input"] = i;
      c["p"] = ch.nonlinearity.degree();
      c["r"] = ch.nonlinearity.coeffs;
      c["n"] = ch.dynamics.n();
      c["a"] = ch.dynamics.a;
      c["m"] = ch.dynamics.m();
      c["b"] = ch.dynamics.b;
      c["d"] = ch.dynamics.delay;
      j["channels"].push_back(std::move(c));
    }
  }
  j["metadata"] = ordered_json::object();
  for (const auto& [k, v] : model.metadata) j["metadata"][k] = v;
  return j.dump(2) + "\n";
}

MimoHammersteinModel parse_model(std::string_view text, const std::string& source) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(source + ": empty model file", 0);
  }
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    const std::size_t line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(source + ":" + std::to_string(line) + ": malformed JSON: " +
                         e.what(),
                     line);
  }
  if (!j.is_object()) throw ParseError(source + ": top level must be an object", 1);

  const auto schema = as_string(require(j, "schema", "", source), "schema", source);
  if (schema != kModelSchema) {
    field_error(source, "schema", "expected '" + std::string(kModelSchema) +
                                      "', found '" + schema + "'");
  }
  const auto version = as_count(require(j, "version", "", source), "version", source);
  if (version != static_cast<std::size_t>(kModelSchemaVersion)) {
    field_error(source, "version",
                "unsupported schema version " + std::to_string(version));
  }

  MimoHammersteinModel model;
  model.inputs = as_signals(require(j, "inputs", "", source), "inputs", source);
  model.outputs = as_signals(require(j, "outputs", "", source), "outputs", source);
  const auto n_in = as_count(require(j, "n_inputs", "", source), "n_inputs", source);
  const auto n_out = as_count(require(j, "n_outputs", "", source), "n_outputs", source);
  if (n_in != model.inputs.size() || n_out != model.outputs.size()) {
    field_error(source, "n_inputs/n_outputs", "disagree with the signal lists");
  }
  if (n_in == 0 || n_out == 0) {
    field_error(source, "n_inputs/n_outputs", "must be positive");
  }

  const auto& chans = require(j, "channels", "", source);
  if (!chans.is_array() || chans.size() != n_in * n_out) {
    field_error(source, "channels",
                "expected an array of " + std::to_string(n_in * n_out) +
                    " channels");
  }
  model.channels.assign(n_out, std::vector<HammersteinChannel>(n_in));
  std::vector<std::vector<bool>> seen(n_out, std::vector<bool>(n_in, false));
  for (std::size_t c = 0; c < chans.size(); ++c) {
    const std::string path = "channels[" + std::to_string(c) + "].";
    const auto& cj = chans[c];
    const auto s = as_count(require(cj, "output", path, source), path + "output", source);
    const auto i = as_count(require(cj, "input", path, source), path + "input", source);
    if (s >= n_out || i >= n_in || seen[s][i]) {
      field_error(source, path + "output/input",
                  "out of range or duplicated channel index");
    }
    seen[s][i] = true;
    HammersteinChannel ch;
    const auto p = as_count(require(cj, "p", path, source), path + "p", source);
    ch.nonlinearity.coeffs = as_numbers(require(cj, "r", path, source), path + "r", source);
    if (p < 1 || ch.nonlinearity.coeffs.size() != p - 1) {
      field_error(source, path + "r", "expected p - 1 = " +
                                          std::to_string(p == 0 ? 0 : p - 1) +
                                          " coefficients");
    }
    const auto n = as_count(require(cj, "n", path, source), path + "n", source);
    ch.dynamics.a = as_numbers(require(cj, "a", path, source), path + "a", source);
    if (ch.dynamics.a.size() != n) {
      field_error(source, path + "a", "expected n = " + std::to_string(n) +
                                          " coefficients");
    }
    const auto m = as_count(require(cj, "m", path, source), path + "m", source);
    ch.dynamics.b = as_numbers(require(cj, "b", path, source), path + "b", source);
    if (ch.dynamics.b.size() != m + 1) {
      field_error(source, path + "b", "expected m + 1 = " +
                                          std::to_string(m + 1) + " coefficients");
    }
    ch.dynamics.delay = as_count(require(cj, "d", path, source), path + "d", source);
    model.channels[s][i] = std::move(ch);
  }

  if (j.contains("metadata")) {
    const auto& meta = j.at("metadata");
    if (!meta.is_object()) field_error(source, "metadata", "expected an object");
    for (const auto& [k, v] : meta.items()) {
      model.metadata[k] = as_string(v, "metadata." + k, source);
    }
  }

  try {
    model.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(source + ": invariant violation: " + e.what(), 0);
  }
  return model;
}

MimoHammersteinModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path), path.string());
}

void save_model(const MimoHammersteinModel& model,
                const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

std::string serialize_series(const NamedSeries& series) {
  if (series.name.empty()) throw InvalidArgument("series: empty name");
  check_label(series.name, "series name");
  std::string out = "index," + series.name + "\n";
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    out += std::to_string(k) + "," + format_number(series.values[k]) + "\n";
  }
  return out;
}

NamedSeries parse_series(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) fail(source, 0, "empty file, missing 'index,<name>' header");
  const auto head = split(lines[0], ',');
  if (head.size() != 2 || head[0] != "index" || head[1].empty()) {
    fail(source, 1, "header must read 'index,<name>'");
  }
  NamedSeries out{std::string(head[1]), {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    const std::string where = "data row " + std::to_string(i);
    if (fields.size() != 2) fail(source, i + 1, where + ": expected 2 fields");
    std::size_t index = 0;
    const auto res = std::from_chars(fields[0].data(),
                                     fields[0].data() + fields[0].size(), index);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size() ||
        index != i - 1) {
      fail(source, i + 1, where + ": index must be " + std::to_string(i - 1));
    }
    const auto value = parse_number(fields[1]);
    if (!value) {
      fail(source, i + 1, where + ": non-numeric value '" +
                              std::string(fields[1]) + "'");
    }
    out.values.push_back(*value);
  }
  if (out.values.empty()) fail(source, lines.size(), "no data rows");
  return out;
}

NamedSeries load_series(const std::filesystem::path& path) {
  return parse_series(read_text_file(path), path.string());
}

void save_series(const NamedSeries& series, const std::filesystem::path& path) {
  write_text_file(path, serialize_series(series));
}

}  // namespace hsid
