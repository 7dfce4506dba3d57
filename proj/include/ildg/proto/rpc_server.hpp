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

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "ildg/proto/auth.hpp"
#include "ildg/proto/envelope.hpp"

namespace httplib {
class Server;
}

namespace ildg::proto {

struct CallContext {
  std::string principal;
  std::string operation;
};

// JSON-envelope RPC endpoint at POST /ildg/v1/rpc. Every request is
// authenticated against the token map before its handler runs; handlers
// report failures by throwing GridError.
class RpcServer {
 public:
  using Handler = std::function<nlohmann::json(const CallContext&, const nlohmann::json& args)>;
  using AuthFailureHook = std::function<void(const RequestEnvelope&, const std::string& message)>;

  explicit RpcServer(TokenMap tokens);
  ~RpcServer();
  RpcServer(const RpcServer&) = delete;
  RpcServer& operator=(const RpcServer&) = delete;

  void handle(std::string operation, Handler handler);
  void on_auth_failure(AuthFailureHook hook);

  ResponseEnvelope dispatch(const RequestEnvelope& request) const;

  /// Underlying HTTP server, for services that add bulk-data routes.
  httplib::Server& http();

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws std::runtime_error if binding fails.
  int start(const std::string& host, int port);
  void stop();

  int port() const;
  /// http://host:port
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Argument accessors for handlers. Missing or mistyped arguments raise
// PARSE_ERROR.
std::string arg_string(const nlohmann::json& args, const char* name);
std::optional<std::string> opt_string(const nlohmann::json& args, const char* name);
std::int64_t arg_int(const nlohmann::json& args, const char* name);
std::optional<std::int64_t> opt_int(const nlohmann::json& args, const char* name);
bool opt_bool(const nlohmann::json& args, const char* name, bool fallback);

}  // namespace ildg::proto
