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

#include "ildg/core/surl.hpp"

#include <charconv>

namespace ildg {

std::optional<Surl> Surl::parse(std::string_view text) {
  constexpr std::string_view kScheme = "srm://";
  if (!text.starts_with(kScheme)) return std::nullopt;
  text.remove_prefix(kScheme.size());
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  const std::string_view authority = text.substr(0, slash);
  const std::string_view path = text.substr(slash + 1);

  const auto colon = authority.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  Surl surl;
  surl.host = std::string(authority.substr(0, colon));
  const auto port_text = authority.substr(colon + 1);
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), surl.port);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() || surl.port <= 0 ||
      surl.port > 65535) {
    return std::nullopt;
  }
  for (unsigned char c : surl.host) {
    if (c <= 0x20 || c == 0x7f || c == '/') return std::nullopt;
  }

  if (path.empty()) return std::nullopt;
  std::string_view rest = path;
  while (true) {
    const auto next = rest.find('/');
    const auto segment = rest.substr(0, next);
    if (segment.empty() || segment == "." || segment == "..") return std::nullopt;
    if (next == std::string_view::npos) break;
    rest.remove_prefix(next + 1);
  }
  for (unsigned char c : path) {
    if (c < 0x20 || c == 0x7f || c == '\\') return std::nullopt;
  }
  surl.path = std::string(path);
  return surl;
}

std::string Surl::str() const { return "srm://" + authority() + "/" + path; }

}  // namespace ildg
