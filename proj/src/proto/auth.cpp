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

#include "ildg/proto/auth.hpp"

#include <fstream>
#include <sstream>

namespace ildg::proto {

namespace {

bool constant_time_equal(std::string_view a, std::string_view b) {
  unsigned diff = a.size() == b.size() ? 0u : 1u;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const unsigned char x = i < a.size() ? static_cast<unsigned char>(a[i]) : 0;
    diff |= x ^ static_cast<unsigned char>(b[i]);
  }
  return diff == 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string authenticate(const RequestEnvelope& envelope, const TokenMap& tokens) {
  auto it = tokens.find(envelope.principal);
  if (it == tokens.end() || !constant_time_equal(envelope.token, it->second)) {
    fail(ErrorCode::AuthFailed, "authentication failed for principal '" + envelope.principal + "'");
  }
  return envelope.principal;
}

TokenMap parse_token_map(std::string_view text) {
  TokenMap tokens;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) continue;
    tokens[std::string(trim(content.substr(0, eq)))] = std::string(trim(content.substr(eq + 1)));
  }
  return tokens;
}

TokenMap load_token_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read token map " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_token_map(buf.str());
}

}  // namespace ildg::proto
