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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ildg/proto/envelope.hpp"

namespace ildg::proto {

struct CallOptions {
  std::chrono::milliseconds connect_timeout{2000};
  std::chrono::milliseconds read_timeout{30000};
};

// Network-level failure (refused connection, timeout, undecodable reply).
// Distinct from a service answering with an error envelope.
class TransportError : public GridError {
 public:
  explicit TransportError(const std::string& message) : GridError(ErrorCode::TransferFailed, message) {}
};

/// POSTs the envelope to <endpoint_url>/ildg/v1/rpc. Service errors come back
/// in the envelope; transport failures throw TransportError.
ResponseEnvelope call(const std::string& endpoint_url, const RequestEnvelope& envelope,
                      const CallOptions& options = {});

class RpcClient {
 public:
  using Observer = std::function<void(const std::string& endpoint_url, const std::string& operation)>;

  RpcClient(std::string principal, std::string token, CallOptions options = {});

  /// Returns the result or throws GridError (TransportError for transport).
  nlohmann::json invoke(const std::string& endpoint_url, const std::string& operation,
                        nlohmann::json args = nlohmann::json::object()) const;

  void set_observer(Observer observer) { observer_ = std::move(observer); }
  const CallOptions& options() const { return options_; }

 private:
  std::string principal_;
  std::string token_;
  CallOptions options_;
  Observer observer_;
};

// Bulk data plane: raw bytes over HTTP PUT/GET. A non-2xx reply carrying an
// error envelope is rethrown with its code; anything else is TransportError.
void put_file(const std::string& url, const std::filesystem::path& file, const CallOptions& options = {});
void put_bytes(const std::string& url, std::string_view bytes, const CallOptions& options = {});
std::uint64_t get_stream(const std::string& url, const std::function<bool(const char*, std::size_t)>& sink,
                         const CallOptions& options = {});

}  // namespace ildg::proto
