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

// Hammerstein channels and their multi-input multi-output assembly.
//
// A channel maps an input u to an output contribution y through
//
//   v(k) = u(k) + r_2 u(k)^2 + ... + r_p u(k)^p
//   y(k) = -a_1 y(k-1) - ... - a_n y(k-n) + b_0 v(k-d) + ... + b_m v(k-d-m)
//
// Channels feeding the same output share the denominator a_1..a_n. All model
// values live at deviation scale (signal minus operating point); the operating
// point is carried as metadata for the I/O layers.

#ifndef HSID_MODEL_HPP_
#define HSID_MODEL_HPP_

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hsid/dataset.hpp"

namespace hsid {

// Memoryless polynomial with unit linear coefficient and no constant term.
struct StaticNonlinearity {
  std::vector<double> coeffs;  // r_2..r_p

  std::size_t degree() const { return coeffs.size() + 1; }
  double operator()(double u) const;

  bool operator==(const StaticNonlinearity&) const = default;
};

// B(q^-1)/A(q^-1) with a monic A and an integer dead time.
struct LinearDynamics {
  std::vector<double> a;  // a_1..a_n
  std::vector<double> b;  // b_0..b_m, must be non-empty
  std::size_t delay = 0;

  std::size_t n() const { return a.size(); }
  std::size_t m() const { return b.empty() ? 0 : b.size() - 1; }

  bool operator==(const LinearDynamics&) const = default;
};

struct HammersteinChannel {
  StaticNonlinearity nonlinearity;
  LinearDynamics dynamics;

  bool operator==(const HammersteinChannel&) const = default;
};

struct SignalInfo {
  std::string name;
  std::string unit;
  double operating_point = 0.0;

  bool operator==(const SignalInfo&) const = default;
};

struct MimoHammersteinModel {
  std::vector<SignalInfo> inputs;
  std::vector<SignalInfo> outputs;
  // channels[s][j]: input j -> output s.
  std::vector<std::vector<HammersteinChannel>> channels;
  // Free-form annotations (nominal orders, operating conditions).
  std::map<std::string, std::string> metadata;

  std::size_t n_inputs() const { return inputs.size(); }
  std::size_t n_outputs() const { return outputs.size(); }
  const HammersteinChannel& channel(std::size_t output, std::size_t input) const {
    return channels.at(output).at(input);
  }
  // Denominator shared by every channel of output `s`.
  const std::vector<double>& denominator(std::size_t s) const {
    return channels.at(s).at(0).dynamics.a;
  }

  // Throws InvalidArgument when the grid shape, the shared-denominator rule
  // or a numerator/coefficient invariant is violated.
  void validate() const;

  bool operator==(const MimoHammersteinModel&) const = default;
};

double eval_nonlinearity(const StaticNonlinearity& f, double u);

// Zero initial conditions; output length equals input length.
Series simulate_channel(const HammersteinChannel& channel,
                        std::span<const double> u);

// Linear part only, driven by an already transformed input v.
Series filter_linear(const LinearDynamics& dynamics, std::span<const double> v);

// Output s is the sum over inputs j of simulate_channel(channels[s][j], U[j]).
// Inputs are at deviation scale.
std::vector<Series> simulate_mimo(const MimoHammersteinModel& model,
                                  const std::vector<Series>& inputs);

// Roots of z^n + a_1 z^(n-1) + ... + a_n, i.e. the poles of 1/A(q^-1).
std::vector<std::complex<double>> denominator_roots(std::span<const double> a);

// True when every pole lies strictly inside the unit circle.
bool is_stable(const LinearDynamics& dynamics);
bool is_stable(const MimoHammersteinModel& model);

// The identified dual-input dual-output weld pool model: inputs peak current
// I_p [A] and wire feed speed V_f [cm/s], outputs back-side width W_b [mm] and
// top-side reinforcement H_f [mm].
MimoHammersteinModel paper_preset();

// Names accepted by `preset_by_name`.
std::vector<std::string> preset_names();
// Throws InvalidArgument listing the known names on a miss.
MimoHammersteinModel preset_by_name(const std::string& name);

}  // namespace hsid

#endif  // HSID_MODEL_HPP_
