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

#include "ildg/core/metadata.hpp"

#include <chrono>

#include "ildg/core/crc32.hpp"
#include "ildg/core/decimal.hpp"
#include "ildg/core/error.hpp"

namespace ildg {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::ParseError, what);
}

}  // namespace

bool is_clean_text(std::string_view text) {
  if (text.empty() || is_space(text.front()) || is_space(text.back())) return false;
  for (unsigned char c : text) {
    if (c < 0x20 || c == 0x7f) return false;
  }
  return true;
}

bool is_valid_ensemble_id(std::string_view id) {
  constexpr std::string_view kScheme = "mc://";
  if (!id.starts_with(kScheme)) return false;
  for (unsigned char c : id) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return !ensemble_authority(id).empty();
}

std::string ensemble_authority(std::string_view id) {
  constexpr std::string_view kScheme = "mc://";
  if (!id.starts_with(kScheme)) return {};
  id.remove_prefix(kScheme.size());
  return std::string(id.substr(0, id.find('/')));
}

bool is_valid_date(std::string_view date) {
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') return false;
  auto digits = [&](std::size_t pos, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (date[i] < '0' || date[i] > '9') return false;
      out = out * 10 + (date[i] - '0');
    }
    return true;
  };
  int y = 0, m = 0, d = 0;
  if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return false;
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  return ymd.ok();
}

void validate(const EnsembleMetadata& e) {
  require(is_valid_ensemble_id(e.ensemble_id), "ensembleId must be an mc:// URI without whitespace");
  require(is_clean_text(e.project_name), "projectName must be non-empty text");
  require(is_clean_text(e.institution), "institution must be non-empty text");
  if (e.collaboration) require(is_clean_text(*e.collaboration), "collaboration must be non-empty text");
  require(e.lattice.nx >= 1 && e.lattice.ny >= 1 && e.lattice.nz >= 1 && e.lattice.nt >= 1,
          "lattice extents must be positive");
  require(is_clean_text(e.action_name), "action name must be non-empty text");
  require(is_decimal(e.beta), "beta must be a decimal number");
}

void validate(const ConfigurationMetadata& c) {
  require(is_valid_ensemble_id(c.ensemble_id), "ensembleId must be an mc:// URI without whitespace");
  require(is_clean_text(c.series), "series must be non-empty text");
  require(c.update >= 0, "update must be non-negative");
  require(is_valid_date(c.date), "date must be a valid YYYY-MM-DD calendar date");
  if (c.ave_plaquette) require(is_decimal(*c.ave_plaquette), "avePlaquette must be a decimal number");
  require(is_crc32_hex(c.crc32), "crc32 must match ^[0-9a-f]{8}$");
  require(c.size >= 0, "size must be non-negative");
}

}  // namespace ildg
