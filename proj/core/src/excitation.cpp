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

#include "hsid/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "hsid/error.hpp"

namespace hsid {

namespace {

__extension__ using Wide = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<Wide>(a) * b) % m);
}

}  // namespace

void AmplitudeGrid::validate() const {
  if (!std::isfinite(low) || !std::isfinite(high) || !std::isfinite(step)) {
    throw InvalidArgument("grid: bounds and step must be finite");
  }
  if (!(step > 0.0)) throw InvalidArgument("grid: step must be positive");
  if (!(high > low)) throw InvalidArgument("grid: high must exceed low");
  const double span = (high - low) / step;
  if (std::abs(span - std::round(span)) > 1e-9 * std::max(1.0, span)) {
    throw InvalidArgument("grid: (high - low) is not a multiple of step");
  }
}

std::size_t AmplitudeGrid::levels() const {
  return static_cast<std::size_t>(std::llround((high - low) / step)) + 1;
}

double AmplitudeGrid::level(std::size_t index) const {
  return std::min(low + step * static_cast<double>(index), high);
}

bool AmplitudeGrid::contains(double value) const {
  if (value < low || value > high) return false;
  for (std::size_t i = 0; i < levels(); ++i) {
    if (value == level(i)) return true;
  }
  return false;
}

LcgState make_lcg(std::uint64_t seed, std::uint64_t multiplier,
                  std::uint64_t modulus) {
  if (modulus < 2 || multiplier == 0 || multiplier >= modulus) {
    throw InvalidArgument("lcg: invalid multiplier/modulus");
  }
  if (seed == 0 || seed >= modulus) {
    throw InvalidArgument("lcg: seed must lie in [1, " +
                          std::to_string(modulus - 1) + "], got " +
                          std::to_string(seed));
  }
  return {seed, multiplier, modulus};
}

std::pair<LcgState, double> lcg_next(LcgState s) {
  s.state = mulmod(s.multiplier, s.state, s.modulus);
  return {s, static_cast<double>(s.state) / static_cast<double>(s.modulus)};
}

LcgState lcg_jump(LcgState s, std::uint64_t steps) {
  std::uint64_t factor = 1;
  std::uint64_t base = s.multiplier;
  while (steps > 0) {
    if (steps & 1U) factor = mulmod(factor, base, s.modulus);
    base = mulmod(base, base, s.modulus);
    steps >>= 1U;
  }
  s.state = mulmod(factor, s.state, s.modulus);
  return s;
}

LcgState excitation_stream(std::uint64_t seed, std::size_t index) {
  return lcg_jump(make_lcg(seed), kStreamSpacing * index);
}

Series generate_excitation(const AmplitudeGrid& grid, std::size_t n,
                           LcgState stream, std::size_t hold) {
  grid.validate();
  if (n == 0) throw InvalidArgument("excitation: length must be at least 1");
  if (hold == 0) throw InvalidArgument("excitation: hold must be at least 1");
  const std::size_t levels = grid.levels();
  Series out;
  out.reserve(n);
  while (out.size() < n) {
    double uniform = 0.0;
    std::tie(stream, uniform) = lcg_next(stream);
    const auto index = std::min(
        static_cast<std::size_t>(uniform * static_cast<double>(levels)),
        levels - 1);
    const double value = grid.level(index);
    for (std::size_t h = 0; h < hold && out.size() < n; ++h) {
      out.push_back(value);
    }
  }
  return out;
}

Series generate_excitation(const AmplitudeGrid& grid, std::size_t n,
                           std::uint64_t seed, std::size_t hold) {
  return generate_excitation(grid, n, make_lcg(seed), hold);
}

Series normalized_autocorrelation(const Series& x, std::size_t max_lag) {
  if (x.size() <= max_lag) {
    throw InvalidArgument("autocorrelation: series shorter than max lag");
  }
  const double mean =
      std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  Series centered(x.size());
  std::transform(x.begin(), x.end(), centered.begin(),
                 [mean](double v) { return v - mean; });
  double energy = 0.0;
  for (double v : centered) energy += v * v;
  if (energy == 0.0) throw InvalidArgument("autocorrelation: constant series");
  Series rho(max_lag + 1);
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    double acc = 0.0;
    for (std::size_t k = tau; k < centered.size(); ++k) {
      acc += centered[k] * centered[k - tau];
    }
    rho[tau] = acc / energy;
  }
  return rho;
}

}  // namespace hsid
