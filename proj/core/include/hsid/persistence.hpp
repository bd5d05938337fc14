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

// Text formats for datasets, models and single-signal series. The byte-level
// grammar is documented in docs/formats.md.

#ifndef HSID_PERSISTENCE_HPP_
#define HSID_PERSISTENCE_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "hsid/dataset.hpp"
#include "hsid/model.hpp"

namespace hsid {

// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);
// Strict parse of a whole token; nullopt for anything but a finite number.
std::optional<double> parse_number(std::string_view text);

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr int kModelSchemaVersion = 1;

std::string serialize_dataset(const Dataset& data);
// `source` names the origin in error messages.
Dataset parse_dataset(std::string_view text, const std::string& source = "dataset");
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

std::string serialize_model(const MimoHammersteinModel& model);
MimoHammersteinModel parse_model(std::string_view text,
                                 const std::string& source = "model");
MimoHammersteinModel load_model(const std::filesystem::path& path);
void save_model(const MimoHammersteinModel& model,
                const std::filesystem::path& path);

// Two-column series file: "index,<name>" header, then "k,value" rows.
struct NamedSeries {
  std::string name;
  Series values;

  bool operator==(const NamedSeries&) const = default;
};
std::string serialize_series(const NamedSeries& series);
NamedSeries parse_series(std::string_view text, const std::string& source = "series");
NamedSeries load_series(const std::filesystem::path& path);
void save_series(const NamedSeries& series, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hsid

#endif  // HSID_PERSISTENCE_HPP_
