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

#include "hsid/dataset.hpp"

#include <cmath>
#include <string>

#include "hsid/error.hpp"

namespace hsid {

std::size_t Dataset::size() const {
  if (!inputs.empty()) return inputs.front().values.size();
  if (!outputs.empty()) return outputs.front().values.size();
  return 0;
}

void Dataset::validate() const {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw InvalidArgument("dataset: sample period must be positive, got " +
                          std::to_string(sample_period));
  }
  if (inputs.empty() || outputs.empty()) {
    throw InvalidArgument("dataset: needs at least one input and one output");
  }
  const std::size_t n = size();
  if (n == 0) throw InvalidArgument("dataset: series are empty");
  auto check = [n](const Signal& s) {
    if (s.values.size() != n) {
      throw InvalidArgument("dataset: signal '" + s.name + "' has " +
                            std::to_string(s.values.size()) +
                            " samples, expected " + std::to_string(n));
    }
  };
  for (const auto& s : inputs) check(s);
  for (const auto& s : outputs) check(s);
}

std::vector<Series> Dataset::input_series() const {
  std::vector<Series> out;
  out.reserve(inputs.size());
  for (const auto& s : inputs) out.push_back(s.values);
  return out;
}

std::vector<Series> Dataset::output_series() const {
  std::vector<Series> out;
  out.reserve(outputs.size());
  for (const auto& s : outputs) out.push_back(s.values);
  return out;
}

}  // namespace hsid
