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

#include "hsid/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "hsid/error.hpp"
#include "hsid/persistence.hpp"

namespace hsid {

namespace {

Dataset slice(const Dataset& data, std::size_t begin, std::size_t end) {
  Dataset out = data;
  auto cut = [&](std::vector<Signal>& signals) {
    for (auto& s : signals) {
      s.values = Series(s.values.begin() + static_cast<std::ptrdiff_t>(begin),
                        s.values.begin() + static_cast<std::ptrdiff_t>(end));
    }
  };
  cut(out.inputs);
  cut(out.outputs);
  return out;
}

void check_arity(const MimoHammersteinModel& model, const Dataset& data) {
  if (model.n_inputs() != data.n_inputs() ||
      model.n_outputs() != data.n_outputs()) {
    throw InvalidArgument(
        "validate: model is " + std::to_string(model.n_inputs()) + "x" +
        std::to_string(model.n_outputs()) + " (inputs x outputs), dataset is " +
        std::to_string(data.n_inputs()) + "x" +
        std::to_string(data.n_outputs()));
  }
}

}  // namespace

DatasetSplit split_dataset(const Dataset& data, std::size_t n_train) {
  data.validate();
  const std::size_t n = data.size();
  if (n_train == 0 || n_train >= n) {
    throw InvalidArgument("split: training length must lie in [1, " +
                          std::to_string(n - 1) + "], got " +
                          std::to_string(n_train));
  }
  return {slice(data, 0, n_train), slice(data, n_train, n)};
}

Dataset concatenate(const Dataset& head, const Dataset& tail) {
  auto same_header = [](const std::vector<Signal>& a,
                        const std::vector<Signal>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].name != b[i].name || a[i].unit != b[i].unit ||
          a[i].operating_point != b[i].operating_point) {
        return false;
      }
    }
    return true;
  };
  if (head.sample_period != tail.sample_period ||
      !same_header(head.inputs, tail.inputs) ||
      !same_header(head.outputs, tail.outputs)) {
    throw InvalidArgument("concatenate: dataset headers differ");
  }
  Dataset out = head;
  auto append = [](std::vector<Signal>& dst, const std::vector<Signal>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i].values.insert(dst[i].values.end(), src[i].values.begin(),
                           src[i].values.end());
    }
  };
  append(out.inputs, tail.inputs);
  append(out.outputs, tail.outputs);
  return out;
}

ErrorStatistics error_statistics(const Series& errors, StdMode mode) {
  ErrorStatistics st;
  if (errors.empty()) return st;
  const auto n = static_cast<double>(errors.size());
  double sum = 0.0, sq = 0.0;
  for (double e : errors) {
    sum += e;
    sq += e * e;
    st.max_abs = std::max(st.max_abs, std::abs(e));
  }
  st.mean = sum / n;
  st.rms = std::sqrt(sq / n);
  double dev = 0.0;
  for (double e : errors) dev += (e - st.mean) * (e - st.mean);
  const double denom =
      mode == StdMode::kSample && errors.size() > 1 ? n - 1.0 : n;
  st.std = std::sqrt(dev / denom);
  return st;
}

Series OutputValidation::errors() const {
  Series e(actual.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = actual[k] - predicted[k];
  return e;
}

std::vector<Series> predict(const MimoHammersteinModel& model,
                            const Dataset& data,
                            const ValidationOptions& options) {
  data.validate();
  model.validate();
  check_arity(model, data);
  const std::size_t len = data.size();

  std::vector<Series> inputs;
  for (std::size_t j = 0; j < data.n_inputs(); ++j) {
    Series u = data.inputs[j].values;
    const double op = model.inputs[j].operating_point;
    for (double& x : u) x -= op;
    inputs.push_back(std::move(u));
  }

  std::vector<Series> out;
  if (!options.one_step_ahead) {
    out = simulate_mimo(model, inputs);
  } else {
    for (std::size_t s = 0; s < model.n_outputs(); ++s) {
      // Numerator part: each channel with its denominator removed.
      Series pred(len, 0.0);
      for (std::size_t j = 0; j < model.n_inputs(); ++j) {
        auto ch = model.channel(s, j);
        ch.dynamics.a.clear();
        const Series part = simulate_channel(ch, inputs[j]);
        for (std::size_t k = 0; k < len; ++k) pred[k] += part[k];
      }
      const auto& a = model.denominator(s);
      const Series& y = data.outputs[s].values;
      const double op = model.outputs[s].operating_point;
      for (std::size_t k = 0; k < len; ++k) {
        for (std::size_t i = 1; i <= a.size() && i <= k; ++i) {
          pred[k] -= a[i - 1] * (y[k - i] - op);
        }
      }
      out.push_back(std::move(pred));
    }
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    const double op = model.outputs[s].operating_point;
    for (double& x : out[s]) x += op;
  }
  return out;
}

namespace {

ValidationReport build_report(const MimoHammersteinModel& model,
                              const Dataset& data, std::size_t from,
                              const ValidationOptions& options) {
  const auto predictions = predict(model, data, options);
  ValidationReport report;
  report.one_step_ahead = options.one_step_ahead;
  report.std_mode = options.std_mode;
  report.first_index = from;
  for (std::size_t s = 0; s < data.n_outputs(); ++s) {
    OutputValidation ov;
    ov.name = data.outputs[s].name;
    ov.unit = data.outputs[s].unit;
    const auto& y = data.outputs[s].values;
    ov.actual.assign(y.begin() + static_cast<std::ptrdiff_t>(from), y.end());
    ov.predicted.assign(
        predictions[s].begin() + static_cast<std::ptrdiff_t>(from),
        predictions[s].end());
    ov.n_test = ov.actual.size();
    const auto st = error_statistics(ov.errors(), options.std_mode);
    ov.mean_error = st.mean;
    ov.std_error = st.std;
    ov.rms_error = st.rms;
    ov.max_abs_error = st.max_abs;
    report.outputs.push_back(std::move(ov));
  }
  return report;
}

}  // namespace

ValidationReport evaluate(const MimoHammersteinModel& model, const Dataset& test,
                          const ValidationOptions& options) {
  check_arity(model, test);
  return build_report(model, test, 0, options);
}

ValidationReport evaluate(const MimoHammersteinModel& model,
                          const Dataset& history, const Dataset& test,
                          const ValidationOptions& options) {
  check_arity(model, test);
  const Dataset full = concatenate(history, test);
  return build_report(model, full, history.size(), options);
}

std::string format_validation_summary(const ValidationReport& report) {
  std::ostringstream os;
  char buf[256];
  os << "# hold-out validation ("
     << (report.one_step_ahead ? "one-step-ahead" : "free-run")
     << " prediction, "
     << (report.std_mode == StdMode::kSample ? "sample" : "population")
     << " standard deviation)\n";
  os << "output  unit  n_test  mean_error  std_error  rms_error  max_abs_error\n";
  for (const auto& ov : report.outputs) {
    std::snprintf(buf, sizeof buf, "%s  %s  %zu  %.9e  %.9e  %.9e  %.9e\n",
                  ov.name.c_str(), ov.unit.empty() ? "-" : ov.unit.c_str(),
                  ov.n_test, ov.mean_error, ov.std_error, ov.rms_error,
                  ov.max_abs_error);
    os << buf;
  }
  return os.str();
}

std::string format_validation_trace(const ValidationReport& report) {
  std::ostringstream os;
  char buf[64];
  auto cell = [&](const std::string& text) {
    std::snprintf(buf, sizeof buf, "%-26s", text.c_str());
    os << buf;
  };
  cell("index");
  for (const auto& ov : report.outputs) {
    cell(ov.name + ".actual");
    cell(ov.name + ".predicted");
    cell(ov.name + ".error");
  }
  os << '\n';
  const std::size_t rows =
      report.outputs.empty() ? 0 : report.outputs.front().n_test;
  for (std::size_t k = 0; k < rows; ++k) {
    cell(std::to_string(report.first_index + k));
    for (const auto& ov : report.outputs) {
      cell(format_number(ov.actual[k]));
      cell(format_number(ov.predicted[k]));
      cell(format_number(ov.actual[k] - ov.predicted[k]));
    }
    os << '\n';
  }
  return os.str();
}

Series gaussian_noise(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&engine]() {
    // 53 random bits mapped to (0, 1].
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  Series out;
  out.reserve(n + 1);
  while (out.size() < n) {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    out.push_back(sigma * radius * std::cos(angle));
    out.push_back(sigma * radius * std::sin(angle));
  }
  out.resize(n);
  return out;
}

}  // namespace hsid
