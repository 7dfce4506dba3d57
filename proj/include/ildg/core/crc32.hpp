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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace ildg {

// Incremental CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320).
class Crc32 {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view bytes);

  std::uint32_t value() const { return ~state_; }
  /// Lowercase, zero-padded 8-digit hex.
  std::string hex() const;

 private:
  std::uint32_t state_ = 0xFFFFFFFFu;
};

std::string crc32_of(std::span<const std::byte> bytes);
std::string crc32_of(std::string_view bytes);

/// Streams the file; throws std::runtime_error if it cannot be read.
std::string crc32_of_file(const std::filesystem::path& path);

std::string crc32_hex(std::uint32_t value);

/// Matches ^[0-9a-f]{8}$.
bool is_crc32_hex(std::string_view text);

}  // namespace ildg
