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
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "ildg/core/metadata.hpp"

namespace ildg {

// One row of the single query view: a configuration joined with its
// ensemble. Column names follow the document element names except that
// <update> becomes "updates" and <lattice> splits into nx/ny/nz/nt.
struct FlatRecord {
  std::string gfn;
  std::string ensemble_id;
  std::string project_name;
  std::string institution;
  std::string collaboration;  // "" when the ensemble names none
  std::string series;
  std::int64_t updates = 0;
  std::string date;
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t nz = 0;
  std::int64_t nt = 0;
  std::string action_name;
  std::string beta;
  std::string ave_plaquette;  // "" when absent
  std::string crc32;
  std::int64_t size = 0;
  bool withdrawn = false;
  std::int64_t version = 1;

  bool operator==(const FlatRecord&) const = default;
};

enum class ColumnType { String, Integer, Decimal, Boolean };

struct ColumnInfo {
  std::string_view name;
  ColumnType type;
};

/// View columns in display order.
std::span<const ColumnInfo> flat_columns();
std::optional<ColumnInfo> find_column(std::string_view name);

struct DecimalValue {
  std::string text;  // empty when the optional source field is absent
};

using ColumnValue = std::variant<std::string, std::int64_t, DecimalValue, bool>;

/// Throws std::out_of_range for an unknown column.
ColumnValue column_value(const FlatRecord& record, std::string_view column);

/// String form used for display and filename templating.
std::string column_text(const FlatRecord& record, std::string_view column);

/// Throws GridError(KEY_MISMATCH) when the documents belong to different
/// ensembles.
FlatRecord flatten(const ConfigurationMetadata& config, const EnsembleMetadata& ensemble,
                   bool withdrawn, std::int64_t version);

void to_json(nlohmann::json& j, const FlatRecord& record);
void from_json(const nlohmann::json& j, FlatRecord& record);

}  // namespace ildg
