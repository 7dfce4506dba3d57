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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ildg/core/clock.hpp"
#include "ildg/proto/rpc_server.hpp"
#include "ildg/proto/service_descriptor.hpp"

namespace ildg::registry {

using proto::ServiceDescriptor;
using proto::ServiceType;

// Soft-state service directory. Entries are keyed by (type, endpoint URL)
// and vanish once their TTL lapses unless refreshed by re-registration.
class Registry {
 public:
  explicit Registry(std::shared_ptr<const Clock> clock);

  /// Upserts the entry; returns its new expiry. Throws QUERY_ERROR for a
  /// non-positive TTL or a relative URL.
  TimePoint register_service(ServiceType type, const std::string& endpoint_url, const std::string& site,
                             std::int64_t ttl_seconds);

  /// Live entries of one type ordered by (site, endpoint URL).
  std::vector<ServiceDescriptor> list_services(ServiceType type) const;

  std::size_t size() const;

 private:
  void purge_expired(TimePoint now) const;

  std::shared_ptr<const Clock> clock_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<ServiceType, std::string>, ServiceDescriptor> entries_;
};

/// Installs the "register" and "list_services" operations.
void bind_registry(proto::RpcServer& server, Registry& registry);

class RegistryService {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;
    proto::TokenMap tokens;
    std::shared_ptr<const Clock> clock;  // defaults to the system clock
  };

  explicit RegistryService(Options options);
  ~RegistryService();

  std::string url() const { return server_.base_url(); }
  Registry& registry() { return registry_; }
  void stop() { server_.stop(); }

 private:
  Registry registry_;
  proto::RpcServer server_;
};

}  // namespace ildg::registry
