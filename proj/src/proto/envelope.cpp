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

#include "ildg/proto/envelope.hpp"

namespace ildg::proto {

using nlohmann::json;

ResponseEnvelope ResponseEnvelope::success(json result) {
  ResponseEnvelope r;
  r.ok = true;
  r.result = std::move(result);
  return r;
}

ResponseEnvelope ResponseEnvelope::failure(ErrorCode code, std::string message) {
  ResponseEnvelope r;
  r.ok = false;
  r.code = code;
  r.message = std::move(message);
  return r;
}

const json& ResponseEnvelope::value() const {
  if (!ok) throw GridError(code, message);
  return result;
}

json encode(const RequestEnvelope& request) {
  return json{{"principal", request.principal},
              {"token", request.token},
              {"operation", request.operation},
              {"args", request.args}};
}

json encode(const ResponseEnvelope& response) {
  if (response.ok) return json{{"status", "ok"}, {"result", response.result}};
  return json{{"status", "error"},
              {"code", std::string(error_code_name(response.code))},
              {"message", response.message}};
}

namespace {

const json& field(const json& body, const char* name, json::value_t type) {
  auto it = body.find(name);
  if (it == body.end() || it->type() != type) {
    fail(ErrorCode::ParseError, std::string("envelope field '") + name + "' missing or mistyped");
  }
  return *it;
}

}  // namespace

RequestEnvelope decode_request(const json& body) {
  if (!body.is_object()) fail(ErrorCode::ParseError, "request envelope must be a JSON object");
  RequestEnvelope r;
  r.principal = field(body, "principal", json::value_t::string).get<std::string>();
  r.token = field(body, "token", json::value_t::string).get<std::string>();
  r.operation = field(body, "operation", json::value_t::string).get<std::string>();
  auto args = body.find("args");
  if (args != body.end()) {
    if (!args->is_object()) fail(ErrorCode::ParseError, "envelope field 'args' must be an object");
    r.args = *args;
  }
  if (r.principal.empty()) fail(ErrorCode::ParseError, "principal must be non-empty");
  if (r.operation.empty()) fail(ErrorCode::ParseError, "operation must be non-empty");
  return r;
}

ResponseEnvelope decode_response(const json& body) {
  if (!body.is_object()) fail(ErrorCode::ParseError, "response envelope must be a JSON object");
  const auto status = field(body, "status", json::value_t::string).get<std::string>();
  if (status == "ok") {
    auto it = body.find("result");
    if (it == body.end()) fail(ErrorCode::ParseError, "ok response without result");
    if (body.contains("code")) fail(ErrorCode::ParseError, "ok response carries an error code");
    return ResponseEnvelope::success(*it);
  }
  if (status == "error") {
    if (body.contains("result")) fail(ErrorCode::ParseError, "error response carries a result");
    const auto name = field(body, "code", json::value_t::string).get<std::string>();
    auto code = parse_error_code(name);
    if (!code) fail(ErrorCode::ParseError, "unknown error code " + name);
    return ResponseEnvelope::failure(*code, field(body, "message", json::value_t::string).get<std::string>());
  }
  fail(ErrorCode::ParseError, "unknown response status " + status);
}

}  // namespace ildg::proto
