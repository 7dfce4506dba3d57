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

#include "ildg/core/gfn.hpp"

#include <charconv>

#include "ildg/core/error.hpp"

namespace ildg {

namespace {

constexpr std::string_view kScheme = "gfn://";

bool unreserved(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

// Only accepts the canonical output of percent_encode, so decoding is the
// exact inverse.
std::optional<std::string> percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '%') {
      if (i + 2 >= text.size()) return std::nullopt;
      const int hi = hex_value(text[i + 1]);
      const int lo = hex_value(text[i + 2]);
      if (hi < 0 || lo < 0) return std::nullopt;
      const auto decoded = static_cast<unsigned char>(hi * 16 + lo);
      if (unreserved(decoded)) return std::nullopt;
      out.push_back(static_cast<char>(decoded));
      i += 2;
    } else if (unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      return std::nullopt;
    }
  }
  return out;
}

GlobalFileName GlobalFileName::from_parts(const Parts& parts) {
  GlobalFileName gfn;
  gfn.parts_ = parts;
  gfn.text_ = std::string(kScheme) + parts.authority + "/" + percent_encode(parts.project_name) + "/" +
              percent_encode(parts.series) + "/" + std::to_string(parts.update);
  return gfn;
}

std::optional<GlobalFileName> GlobalFileName::parse(std::string_view text) {
  if (!text.starts_with(kScheme)) return std::nullopt;
  std::string_view rest = text.substr(kScheme.size());
  std::string_view segments[4];
  for (int i = 0; i < 3; ++i) {
    const auto slash = rest.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    segments[i] = rest.substr(0, slash);
    rest.remove_prefix(slash + 1);
  }
  segments[3] = rest;
  for (auto s : segments) {
    if (s.empty()) return std::nullopt;
  }
  Parts parts;
  parts.authority = std::string(segments[0]);
  for (unsigned char c : parts.authority) {
    if (c <= 0x20 || c == 0x7f) return std::nullopt;
  }
  auto project = percent_decode(segments[1]);
  auto series = percent_decode(segments[2]);
  if (!project || !series) return std::nullopt;
  parts.project_name = std::move(*project);
  parts.series = std::move(*series);
  const auto digits = segments[3];
  if (digits.front() < '0' || digits.front() > '9') return std::nullopt;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), parts.update);
  if (ec != std::errc{} || end != digits.data() + digits.size()) return std::nullopt;
  GlobalFileName gfn = from_parts(parts);
  if (gfn.text_ != text) return std::nullopt;  // non-canonical spelling
  return gfn;
}

GlobalFileName derive_gfn(const ConfigurationMetadata& config, const EnsembleMetadata& ensemble) {
  if (config.ensemble_id != ensemble.ensemble_id) {
    fail(ErrorCode::KeyMismatch, "configuration ensembleId " + config.ensemble_id +
                                     " does not match ensemble " + ensemble.ensemble_id);
  }
  return GlobalFileName::from_parts(
      {ensemble_authority(ensemble.ensemble_id), ensemble.project_name, config.series, config.update});
}

}  // namespace ildg
