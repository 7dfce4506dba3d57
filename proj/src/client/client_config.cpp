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

#include "ildg/client/client_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ildg/core/error.hpp"
#include "ildg/proto/service_descriptor.hpp"

namespace ildg::client {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t positive_int(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out <= 0) {
    fail(ErrorCode::ParseError, "config: " + std::string(key) + " must be a positive integer");
  }
  return out;
}

}  // namespace

ClientConfig parse_client_config(std::string_view text) {
  ClientConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key == "registryURL") config.registry_url = value;
    else if (key == "principal") config.principal = value;
    else if (key == "token") config.token = value;
    else if (key == "site") config.site = value;
    else if (key == "pollIntervalMs") config.poll_interval_ms = positive_int(key, value);
    else if (key == "pollTimeoutMs") config.poll_timeout_ms = positive_int(key, value);
    else fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
  }
  if (!proto::is_absolute_url(config.registry_url)) {
    fail(ErrorCode::ParseError, "config: registryURL must be an absolute URL");
  }
  return config;
}

ClientConfig load_client_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_client_config(text.str());
}

std::filesystem::path default_config_path() {
  if (const char* env = std::getenv("ILDG_CONFIG"); env && *env) return env;
  const char* home = std::getenv("HOME");
  return std::filesystem::path(home ? home : ".") / ".ildg.conf";
}

}  // namespace ildg::client
