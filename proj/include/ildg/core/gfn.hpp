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

#include "ildg/core/metadata.hpp"

namespace ildg {

// Location-independent name of one configuration's data file:
//   gfn://<authority>/<projectName>/<series>/<update>
// with projectName and series percent-encoded.
class GlobalFileName {
 public:
  struct Parts {
    std::string authority;
    std::string project_name;
    std::string series;
    std::int64_t update = 0;

    bool operator==(const Parts&) const = default;
  };

  static GlobalFileName from_parts(const Parts& parts);
  static std::optional<GlobalFileName> parse(std::string_view text);

  const std::string& str() const { return text_; }
  const Parts& parts() const { return parts_; }

  auto operator<=>(const GlobalFileName& other) const { return text_ <=> other.text_; }
  bool operator==(const GlobalFileName& other) const { return text_ == other.text_; }

 private:
  std::string text_;
  Parts parts_;
};

/// Throws GridError(KEY_MISMATCH) when the ensemble ids disagree.
GlobalFileName derive_gfn(const ConfigurationMetadata& config, const EnsembleMetadata& ensemble);

/// Encodes every byte outside [A-Za-z0-9-._~] as %XX (uppercase hex).
std::string percent_encode(std::string_view text);
std::optional<std::string> percent_decode(std::string_view text);

}  // namespace ildg
