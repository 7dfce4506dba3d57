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

#include <filesystem>
#include <map>
#include <string>

#include "ildg/proto/envelope.hpp"

namespace ildg::proto {

using TokenMap = std::map<std::string, std::string, std::less<>>;

/// Returns the principal when its token matches exactly; otherwise throws
/// GridError(AUTH_FAILED).
std::string authenticate(const RequestEnvelope& envelope, const TokenMap& tokens);

/// Reads "principal=token" lines; blank lines and '#' comments are skipped.
TokenMap load_token_map(const std::filesystem::path& path);
TokenMap parse_token_map(std::string_view text);

}  // namespace ildg::proto
