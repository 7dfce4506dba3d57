/*
 * Copyright 2026 The ildg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ildg {

struct Lattice {
  std::int64_t nx = 1;
  std::int64_t ny = 1;
  std::int64_t nz = 1;
  std::int64_t nt = 1;

  bool operator==(const Lattice&) const = default;
};

// Describes one ensemble: a set of gauge configurations generated with one
// set of physics parameters.
struct EnsembleMetadata {
  std::string ensemble_id;  // mc://<authority>/...
  std::string project_name;
  std::string institution;
  std::optional<std::string> collaboration;
  Lattice lattice;
  std::string action_name;
  std::string beta;  // decimal text, preserved verbatim

  bool operator==(const EnsembleMetadata&) const = default;
};

// Describes one configuration (one data file). The natural key is
// (ensemble_id, series, update).
struct ConfigurationMetadata {
  std::string ensemble_id;
  std::string series;
  std::int64_t update = 0;
  std::string date;  // YYYY-MM-DD
  std::optional<std::string> ave_plaquette;
  std::string crc32;  // 8 lowercase hex digits
  std::int64_t size = 0;

  bool operator==(const ConfigurationMetadata&) const = default;
};

struct NaturalKey {
  std::string ensemble_id;
  std::string series;
  std::int64_t update = 0;

  auto operator<=>(const NaturalKey&) const = default;
};

inline NaturalKey natural_key(const ConfigurationMetadata& config) {
  return {config.ensemble_id, config.series, config.update};
}

/// Throws GridError(PARSE_ERROR) when a type invariant does not hold.
void validate(const EnsembleMetadata& ensemble);
void validate(const ConfigurationMetadata& config);

/// Host part of an ensemble id ("mc://fnal.gov/x" -> "fnal.gov").
std::string ensemble_authority(std::string_view ensemble_id);

bool is_valid_ensemble_id(std::string_view ensemble_id);
bool is_valid_date(std::string_view date);

/// Non-empty, no leading/trailing whitespace, no control characters.
bool is_clean_text(std::string_view text);

}  // namespace ildg
