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

// Storage URL: srm://<host>:<port>/<path>.
struct Surl {
  std::string host;
  int port = 0;
  std::string path;  // relative, '/'-separated, no "." / ".." / empty segments

  static std::optional<Surl> parse(std::string_view text);

  std::string str() const;
  std::string authority() const { return host + ":" + std::to_string(port); }

  bool operator==(const Surl&) const = default;
};

}  // namespace ildg
