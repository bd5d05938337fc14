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

#include "hsid/preprocess.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hsid/error.hpp"

namespace hsid {

void PreprocessConfig::validate() const {
  if (median_window == 0 || median_window % 2 == 0) {
    throw InvalidArgument("preprocess: median window must be odd and >= 1, got " +
                          std::to_string(median_window));
  }
}

Series median_filter(const Series& x, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw InvalidArgument("median filter: window must be odd and >= 1, got " +
                          std::to_string(window));
  }
  if (window > x.size()) {
    throw InvalidArgument("median filter: window " + std::to_string(window) +
                          " exceeds series length " + std::to_string(x.size()));
  }
  if (window == 1) return x;
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  Series out(x.size());
  std::vector<double> buf(window);
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    for (std::ptrdiff_t w = -half; w <= half; ++w) {
      const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(k + w, 0, n - 1);
      buf[static_cast<std::size_t>(w + half)] = x[static_cast<std::size_t>(idx)];
    }
    auto mid = buf.begin() + half;
    std::nth_element(buf.begin(), mid, buf.end());
    out[static_cast<std::size_t>(k)] = *mid;
  }
  return out;
}

DcRemoval remove_dc(const Series& x, DcMode mode) {
  if (x.empty()) throw InvalidArgument("remove_dc: empty series");
  double offset = mode.reference;
  if (mode.kind == DcMode::Kind::kSubtractMean) {
    offset = std::accumulate(x.begin(), x.end(), 0.0) /
             static_cast<double>(x.size());
  }
  DcRemoval result{Series(x.size()), offset};
  std::transform(x.begin(), x.end(), result.values.begin(),
                 [offset](double v) { return v - offset; });
  return result;
}

PreprocessedDataset preprocess(const Dataset& data,
                               const PreprocessConfig& config) {
  data.validate();
  config.validate();
  PreprocessedDataset out{data, {}, {}};
  auto condition = [&](Signal& s, bool filter) {
    if (filter && config.median_window > 1) {
      s.values = median_filter(s.values, config.median_window);
    }
    const DcMode mode = s.operating_point
                            ? DcMode::subtract_reference(*s.operating_point)
                            : DcMode::subtract_mean();
    auto removed = remove_dc(s.values, mode);
    s.values = std::move(removed.values);
    s.operating_point.reset();
    return removed.offset;
  };
  for (auto& s : out.data.inputs) {
    out.input_offsets.push_back(condition(s, config.filter_inputs));
  }
  for (auto& s : out.data.outputs) {
    out.output_offsets.push_back(condition(s, config.filter_outputs));
  }
  return out;
}

}  // namespace hsid
