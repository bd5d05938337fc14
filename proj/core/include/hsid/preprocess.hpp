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

#ifndef HSID_PREPROCESS_HPP_
#define HSID_PREPROCESS_HPP_

#include <cstddef>
#include <optional>

#include "hsid/dataset.hpp"

namespace hsid {

// How the DC level of a series is removed.
struct DcMode {
  enum class Kind { kSubtractMean, kSubtractReference };
  Kind kind = Kind::kSubtractMean;
  double reference = 0.0;

  static DcMode subtract_mean() { return {}; }
  static DcMode subtract_reference(double value) {
    return {Kind::kSubtractReference, value};
  }
};

struct DcRemoval {
  Series values;
  double offset = 0.0;
};

struct PreprocessConfig {
  std::size_t median_window = 5;  // odd, >= 1
  bool filter_inputs = false;
  bool filter_outputs = true;

  void validate() const;
};

// Centered running median; edges replicate the boundary sample.
// Throws InvalidArgument for an even window or one longer than the series.
Series median_filter(const Series& x, std::size_t window);

// Throws InvalidArgument for an empty series.
DcRemoval remove_dc(const Series& x, DcMode mode);

struct PreprocessedDataset {
  Dataset data;  // deviation scale, operating points cleared
  // Offset removed from each signal, inputs then outputs.
  std::vector<double> input_offsets;
  std::vector<double> output_offsets;
};

// Median filtering (per config) followed by DC removal. Signals with a
// declared operating point are referenced to it; others lose their mean.
PreprocessedDataset preprocess(const Dataset& data, const PreprocessConfig& config);

}  // namespace hsid

#endif  // HSID_PREPROCESS_HPP_
