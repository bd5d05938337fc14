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

// Pseudo-random excitation on quantized amplitude grids.
//
// Uniform deviates come from the multiplicative congruential recursion
// x' = a x mod M with the minimal-standard constants a = 16807, M = 2^31 - 1,
// so any conforming implementation reproduces the same schedules.

#ifndef HSID_EXCITATION_HPP_
#define HSID_EXCITATION_HPP_

#include <cstddef>
#include <cstdint>
#include <utility>

#include "hsid/dataset.hpp"

namespace hsid {

struct AmplitudeGrid {
  double low = 0.0;
  double high = 0.0;
  double step = 1.0;

  // Throws InvalidArgument unless high > low, step > 0 and the span is an
  // integer number of steps (1e-9 relative tolerance).
  void validate() const;
  std::size_t levels() const;
  double level(std::size_t index) const;
  bool contains(double value) const;
};

struct LcgState {
  static constexpr std::uint64_t kDefaultMultiplier = 16807;
  static constexpr std::uint64_t kDefaultModulus = 2147483647;  // 2^31 - 1

  std::uint64_t state = 1;
  std::uint64_t multiplier = kDefaultMultiplier;
  std::uint64_t modulus = kDefaultModulus;
};

// Rejects seeds outside [1, modulus - 1].
LcgState make_lcg(std::uint64_t seed,
                  std::uint64_t multiplier = LcgState::kDefaultMultiplier,
                  std::uint64_t modulus = LcgState::kDefaultModulus);

// One step: returns the advanced state and state'/modulus in (0, 1).
std::pair<LcgState, double> lcg_next(LcgState s);

// Equivalent to `steps` calls of lcg_next, in O(log steps).
LcgState lcg_jump(LcgState s, std::uint64_t steps);

// Offset between the streams handed to different inputs of one experiment.
inline constexpr std::uint64_t kStreamSpacing = std::uint64_t{1} << 24;

// Stream for input `index` of an experiment seeded with `seed`.
LcgState excitation_stream(std::uint64_t seed, std::size_t index);

// Draws one grid level per `hold` samples: low + step * floor(uniform * levels).
Series generate_excitation(const AmplitudeGrid& grid, std::size_t n,
                           LcgState stream, std::size_t hold = 1);
Series generate_excitation(const AmplitudeGrid& grid, std::size_t n,
                           std::uint64_t seed, std::size_t hold = 1);

// rho(tau) for tau = 0..max_lag after mean removal; rho(0) = 1.
Series normalized_autocorrelation(const Series& x, std::size_t max_lag);

}  // namespace hsid

#endif  // HSID_EXCITATION_HPP_
