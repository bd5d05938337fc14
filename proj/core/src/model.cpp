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

#include "hsid/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsid/error.hpp"

namespace hsid {

double StaticNonlinearity::operator()(double u) const {
  // Horner on u * (1 + r_2 u + ... + r_p u^(p-1)).
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = (acc + *it) * u;
  }
  return u * (1.0 + acc);
}

double eval_nonlinearity(const StaticNonlinearity& f, double u) { return f(u); }

Series filter_linear(const LinearDynamics& dynamics, std::span<const double> v) {
  const auto& a = dynamics.a;
  const auto& b = dynamics.b;
  const std::size_t d = dynamics.delay;
  const std::size_t len = v.size();
  Series y(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    double acc = 0.0;
    const std::size_t na = std::min(a.size(), k);
    for (std::size_t i = 1; i <= na; ++i) acc -= a[i - 1] * y[k - i];
    if (k >= d) {
      const std::size_t nb = std::min(b.size(), k - d + 1);
      for (std::size_t j = 0; j < nb; ++j) acc += b[j] * v[k - d - j];
    }
    y[k] = acc;
  }
  return y;
}

Series simulate_channel(const HammersteinChannel& channel,
                        std::span<const double> u) {
  Series v(u.size());
  std::transform(u.begin(), u.end(), v.begin(),
                 [&](double x) { return channel.nonlinearity(x); });
  return filter_linear(channel.dynamics, v);
}

std::vector<Series> simulate_mimo(const MimoHammersteinModel& model,
                                  const std::vector<Series>& inputs) {
  model.validate();
  if (inputs.size() != model.n_inputs()) {
    throw InvalidArgument("simulate: model expects " +
                          std::to_string(model.n_inputs()) + " inputs, got " +
                          std::to_string(inputs.size()));
  }
  const std::size_t len = inputs.empty() ? 0 : inputs.front().size();
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].size() != len) {
      throw InvalidArgument("simulate: input " + std::to_string(j) + " has " +
                            std::to_string(inputs[j].size()) +
                            " samples, input 0 has " + std::to_string(len));
    }
  }
  std::vector<Series> outputs(model.n_outputs(), Series(len, 0.0));
  for (std::size_t s = 0; s < model.n_outputs(); ++s) {
    // Fixed input order keeps the summation bit-stable.
    for (std::size_t j = 0; j < model.n_inputs(); ++j) {
      const Series part = simulate_channel(model.channel(s, j), inputs[j]);
      for (std::size_t k = 0; k < len; ++k) outputs[s][k] += part[k];
    }
  }
  return outputs;
}

std::vector<std::complex<double>> denominator_roots(std::span<const double> a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) companion(0, i) = -a[i];
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

bool is_stable(const LinearDynamics& dynamics) {
  for (const auto& root : denominator_roots(dynamics.a)) {
    if (!(std::abs(root) < 1.0)) return false;
  }
  return true;
}

bool is_stable(const MimoHammersteinModel& model) {
  for (std::size_t s = 0; s < model.n_outputs(); ++s) {
    if (!is_stable(model.channel(s, 0).dynamics)) return false;
  }
  return true;
}

void MimoHammersteinModel::validate() const {
  if (inputs.empty() || outputs.empty()) {
    throw InvalidArgument("model: needs at least one input and one output");
  }
  if (channels.size() != outputs.size()) {
    throw InvalidArgument("model: " + std::to_string(channels.size()) +
                          " channel rows for " +
                          std::to_string(outputs.size()) + " outputs");
  }
  auto finite = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [](double x) { return std::isfinite(x); });
  };
  for (std::size_t s = 0; s < channels.size(); ++s) {
    const auto& row = channels[s];
    if (row.size() != inputs.size()) {
      throw InvalidArgument("model: row " + std::to_string(s) + " has " +
                            std::to_string(row.size()) + " channels for " +
                            std::to_string(inputs.size()) + " inputs");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& ch = row[j];
      const std::string where =
          "model: channel (" + std::to_string(s) + "," + std::to_string(j) + ")";
      if (ch.dynamics.b.empty()) {
        throw InvalidArgument(where + " has an empty numerator");
      }
      if (!finite(ch.dynamics.a) || !finite(ch.dynamics.b) ||
          !finite(ch.nonlinearity.coeffs)) {
        throw InvalidArgument(where + " has non-finite coefficients");
      }
      if (ch.dynamics.a != row.front().dynamics.a) {
        throw InvalidArgument(where +
                              " does not share the denominator of output " +
                              std::to_string(s));
      }
    }
  }
}

MimoHammersteinModel paper_preset() {
  MimoHammersteinModel model;
  model.inputs = {{"I_p", "A", 150.0}, {"V_f", "cm/s", 7.0}};
  model.outputs = {{"W_b", "mm", 0.0}, {"H_f", "mm", 0.0}};

  const std::vector<double> a_wb{-1.73603, 0.728305, 0.580712, -0.85552,
                                 0.320009};
  const std::vector<double> a_hf{-1.29125, 0.253601, 0.543266, -0.69655,
                                 0.240607};

  // Subscripts read (input, output): f_11, B_11 is I_p -> W_b and
  // f_21, B_21 is V_f -> W_b, both over A_11.
  HammersteinChannel ip_wb{{{-0.01476}},
                           {a_wb, {0.004744, -0.0031, 0.000158, -0.0015}, 1}};
  HammersteinChannel vf_wb{
      {{-0.04142}},
      {a_wb, {0.001614, -0.0047, -0.00742, 0.0000138, -0.00924, 0.002941}, 3}};
  HammersteinChannel ip_hf{
      {{0.002972, -0.00315, 0.000152}},
      {a_hf, {0.00568, 0.002351, 0.000844, 0.000724, -0.00253, -0.00333}, 1}};
  HammersteinChannel vf_hf{
      {{0.115034, 0.133773, -0.02614}},
      {a_hf, {0.005929, -0.01733, 0.010646, -0.01391, -0.00406, -0.02969}, 3}};

  model.channels = {{ip_wb, vf_wb}, {ip_hf, vf_hf}};
  model.metadata = {
      {"name", "paper-gtaw"},
      {"sample_period_s", "1"},
      {"nominal_orders.W_b", "d=1 p=2 m=5 n=3"},
      {"nominal_orders.H_f", "d=3 p=4 m=5 n=5"},
      {"travel_speed_V_w0", "1.9 mm/s"},
  };
  return model;
}

std::vector<std::string> preset_names() { return {"paper-gtaw"}; }

MimoHammersteinModel preset_by_name(const std::string& name) {
  if (name == "paper-gtaw") return paper_preset();
  std::ostringstream msg;
  msg << "unknown preset '" << name << "'; available:";
  for (const auto& known : preset_names()) msg << ' ' << known;
  throw InvalidArgument(msg.str());
}

}  // namespace hsid
