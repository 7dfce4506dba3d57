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
#include <filesystem>
#include <string>
#include <string_view>

namespace ildg::client {

// The registry is the only service address a user supplies; everything else
// is discovered through it.
struct ClientConfig {
  std::string registry_url;
  std::string principal;
  std::string token;
  std::string site;
  std::int64_t poll_interval_ms = 50;
  std::int64_t poll_timeout_ms = 30000;
};

/// key=value lines; blank lines and lines starting with '#' are ignored.
/// PARSE_ERROR for unknown keys, malformed lines or a missing registryURL.
ClientConfig parse_client_config(std::string_view text);
ClientConfig load_client_config(const std::filesystem::path& path);

/// $ILDG_CONFIG if set, else ~/.ildg.conf.
std::filesystem::path default_config_path();

}  // namespace ildg::client
