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

// Hold-out evaluation of identified models.

#ifndef HSID_VALIDATE_HPP_
#define HSID_VALIDATE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hsid/dataset.hpp"
#include "hsid/model.hpp"

namespace hsid {

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

// Contiguous prefix/suffix split; requires 0 < n_train < N.
DatasetSplit split_dataset(const Dataset& data, std::size_t n_train);

// Appends `tail` to `head`; headers must match.
Dataset concatenate(const Dataset& head, const Dataset& tail);

enum class StdMode { kPopulation, kSample };

struct ValidationOptions {
  bool one_step_ahead = false;
  StdMode std_mode = StdMode::kPopulation;
};

struct ErrorStatistics {
  double mean = 0.0;
  double std = 0.0;
  double rms = 0.0;
  double max_abs = 0.0;
};

ErrorStatistics error_statistics(const Series& errors, StdMode mode);

struct OutputValidation {
  std::string name;
  std::string unit;
  double mean_error = 0.0;
  double std_error = 0.0;
  double rms_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t n_test = 0;
  Series actual;
  Series predicted;

  Series errors() const;  // actual - predicted
};

struct ValidationReport {
  std::vector<OutputValidation> outputs;
  bool one_step_ahead = false;
  StdMode std_mode = StdMode::kPopulation;
  std::size_t first_index = 0;  // sample index of the first test sample
};

// Reference hold-out error statistics (mean, standard deviation) of the
// built-in weld pool model for W_b and H_f.
struct ReferenceStatistics {
  double mean;
  double std;
};
inline constexpr ReferenceStatistics kReportedWidthError{0.07973, 0.07769};
inline constexpr ReferenceStatistics kReportedHeightError{-0.07977, 0.03096};

// Model predictions in physical units. Inputs are shifted by the model's
// input operating points and the output operating points are added back.
// Free-run simulation uses inputs only; one-step-ahead also feeds the
// measured outputs of `data` through the denominator.
std::vector<Series> predict(const MimoHammersteinModel& model,
                            const Dataset& data,
                            const ValidationOptions& options = {});

// Compares predictions with the measured outputs of `test`.
ValidationReport evaluate(const MimoHammersteinModel& model, const Dataset& test,
                          const ValidationOptions& options = {});

// Same, with `history` run through the model first so the test segment
// starts from the states the history leaves behind.
ValidationReport evaluate(const MimoHammersteinModel& model,
                          const Dataset& history, const Dataset& test,
                          const ValidationOptions& options = {});

std::string format_validation_summary(const ValidationReport& report);
// Whitespace-aligned columns: index, then actual/predicted/error per output.
std::string format_validation_trace(const ValidationReport& report);

// Zero-mean Gaussian samples from a seeded 64-bit Mersenne Twister via
// Box-Muller; the sequence is fixed for a given seed on every platform.
Series gaussian_noise(std::size_t n, double sigma, std::uint64_t seed);

}  // namespace hsid

#endif  // HSID_VALIDATE_HPP_
