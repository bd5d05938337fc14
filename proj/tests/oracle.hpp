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

// Shared fixtures: the preset-driven oracle record and seeded synthetic
// single-input systems with known orders.

#ifndef HSID_TESTS_ORACLE_HPP_
#define HSID_TESTS_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hsid/dataset.hpp"
#include "hsid/excitation.hpp"
#include "hsid/model.hpp"
#include "hsid/preprocess.hpp"
#include "hsid/validate.hpp"

namespace hsid::testing {

inline constexpr std::uint64_t kOracleSeed = 12345;
inline constexpr std::size_t kOracleLength = 1070;

inline AmplitudeGrid current_grid() { return {130.0, 170.0, 2.0}; }
inline AmplitudeGrid wire_feed_grid() { return {4.0, 10.0, 1.0}; }

// Preset driven by the default excitation; physical units, operating points
// declared, no noise.
inline Dataset oracle_dataset(std::size_t n = kOracleLength,
                              std::uint64_t seed = kOracleSeed) {
  const auto model = paper_preset();
  Dataset data;
  data.sample_period = 1.0;
  const AmplitudeGrid grids[2] = {current_grid(), wire_feed_grid()};
  for (std::size_t j = 0; j < 2; ++j) {
    data.inputs.push_back({model.inputs[j].name, model.inputs[j].unit,
                           model.inputs[j].operating_point,
                           generate_excitation(grids[j], n, excitation_stream(seed, j))});
  }
  for (const auto& out : model.outputs) {
    data.outputs.push_back({out.name, out.unit, out.operating_point, Series(n, 0.0)});
  }
  const auto y = predict(model, data);
  for (std::size_t s = 0; s < y.size(); ++s) data.outputs[s].values = y[s];
  return data;
}

// Deviation-scale copy without any filtering.
inline Dataset deviation_data(const Dataset& data) {
  PreprocessConfig cfg;
  cfg.median_window = 1;
  return preprocess(data, cfg).data;
}

// Uniform on [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

inline double random_sign(std::mt19937_64& rng) { return (rng() & 1U) ? 1.0 : -1.0; }

struct SyntheticCase {
  std::size_t n = 0, m = 0, p = 1, d = 0;
  HammersteinChannel channel;
  Dataset data;  // deviation scale
};

// Real poles with modulus in [0.5, 0.85], |b| in [0.5, 1.5], |r_i| in
// [0.2, 0.5], input on the 21-level grid {-2, -1.8, ..., 2}. With snr_db set,
// white noise filtered by 1/A (equation error) is added, scaled so the
// output signal-to-noise ratio equals snr_db.
inline SyntheticCase make_synthetic(std::uint64_t seed, std::size_t n, std::size_t m,
                                    std::size_t p, std::size_t d, std::size_t length,
                                    double snr_db = std::nan("")) {
  std::mt19937_64 rng(seed);
  SyntheticCase c{n, m, p, d, {}, {}};
  std::vector<double> poly{1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double pole = uniform(rng, 0.5, 0.85) * random_sign(rng);
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + 1] -= pole * poly[k];
    }
    poly = next;
  }
  c.channel.dynamics.a.assign(poly.begin() + 1, poly.end());
  for (std::size_t l = 0; l <= m; ++l) {
    c.channel.dynamics.b.push_back(uniform(rng, 0.5, 1.5) * random_sign(rng));
  }
  for (std::size_t i = 1; i < p; ++i) {
    c.channel.nonlinearity.coeffs.push_back(uniform(rng, 0.2, 0.5) * random_sign(rng));
  }
  c.channel.dynamics.delay = d;

  Series u(length);
  for (auto& x : u) x = -2.0 + 0.2 * static_cast<double>(rng() % 21);
  Series y = simulate_channel(c.channel, u);
  if (!std::isnan(snr_db)) {
    const Series e = gaussian_noise(length, 1.0, seed ^ 0x9e3779b97f4a7c15ULL);
    const Series ye = filter_linear({c.channel.dynamics.a, {1.0}, 0}, e);
    auto stdev = [](const Series& x) {
      double mean = 0.0;
      for (double v : x) mean += v;
      mean /= static_cast<double>(x.size());
      double ss = 0.0;
      for (double v : x) ss += (v - mean) * (v - mean);
      return std::sqrt(ss / static_cast<double>(x.size()));
    };
    const double scale = stdev(y) / stdev(ye) * std::pow(10.0, -snr_db / 20.0);
    for (std::size_t k = 0; k < length; ++k) y[k] += scale * ye[k];
  }
  c.data.inputs.push_back({"u", "", 0.0, u});
  c.data.outputs.push_back({"y", "", 0.0, y});
  return c;
}

}  // namespace hsid::testing

#endif  // HSID_TESTS_ORACLE_HPP_
