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

#include <string>

#include <json.hpp>

#include "ildg/core/error.hpp"

namespace ildg::proto {

inline constexpr std::string_view kRpcPath = "/ildg/v1/rpc";
inline constexpr std::string_view kDataPathPrefix = "/ildg/v1/data/";

struct RequestEnvelope {
  std::string principal;
  std::string token;
  std::string operation;
  nlohmann::json args = nlohmann::json::object();

  bool operator==(const RequestEnvelope&) const = default;
};

// Exactly one of result or (code, message) is meaningful, selected by ok.
struct ResponseEnvelope {
  bool ok = true;
  nlohmann::json result;
  ErrorCode code = ErrorCode::ParseError;
  std::string message;

  static ResponseEnvelope success(nlohmann::json result);
  static ResponseEnvelope failure(ErrorCode code, std::string message);

  /// Returns the result or throws the carried GridError.
  const nlohmann::json& value() const;

  bool operator==(const ResponseEnvelope&) const = default;
};

nlohmann::json encode(const RequestEnvelope& request);
nlohmann::json encode(const ResponseEnvelope& response);

/// Both throw GridError(PARSE_ERROR) on a malformed body.
RequestEnvelope decode_request(const nlohmann::json& body);
ResponseEnvelope decode_response(const nlohmann::json& body);

}  // namespace ildg::proto
