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

#ifndef HSID_DATASET_HPP_
#define HSID_DATASET_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hsid {

using Series = std::vector<double>;

// One recorded signal. `operating_point` is the nominal level the signal is
// measured around; when absent, preprocessing falls back to mean removal.
struct Signal {
  std::string name;
  std::string unit;
  std::optional<double> operating_point;
  Series values;

  bool operator==(const Signal&) const = default;
};

// Uniformly sampled multi-input multi-output record.
struct Dataset {
  double sample_period = 1.0;  // seconds
  std::vector<Signal> inputs;
  std::vector<Signal> outputs;

  // Common series length; 0 for a dataset without signals.
  std::size_t size() const;
  std::size_t n_inputs() const { return inputs.size(); }
  std::size_t n_outputs() const { return outputs.size(); }

  // Throws InvalidArgument unless all series share one positive length,
  // the sample period is positive and finite, and there is at least one
  // input and one output.
  void validate() const;

  std::vector<Series> input_series() const;
  std::vector<Series> output_series() const;

  bool operator==(const Dataset&) const = default;
};

}  // namespace hsid

#endif  // HSID_DATASET_HPP_
