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

#include "ildg/registry/heartbeat.hpp"

#include "ildg/proto/rpc_client.hpp"

namespace ildg::registry {

Heartbeat::Heartbeat(Options options) : options_(std::move(options)) {
  beat();
  thread_ = std::thread([this] {
    std::unique_lock lock(mu_);
    while (!cv_.wait_for(lock, options_.interval, [this] { return stopping_; })) {
      lock.unlock();
      beat();
      lock.lock();
    }
  });
}

Heartbeat::~Heartbeat() { stop(); }

bool Heartbeat::beat() {
  try {
    proto::RpcClient client(options_.principal, options_.token, {std::chrono::milliseconds{1000}, std::chrono::milliseconds{5000}});
    client.invoke(options_.registry_url, "register",
                  {{"serviceType", std::string(proto::service_type_name(options_.type))},
                   {"endpointURL", options_.endpoint_url},
                   {"site", options_.site},
                   {"ttlSeconds", options_.ttl_seconds}});
    return true;
  } catch (const GridError&) {
    return false;
  }
}

void Heartbeat::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

std::unique_ptr<Heartbeat> start_heartbeat(const std::optional<Announce>& announce, proto::ServiceType type,
                                           const std::string& endpoint_url) {
  if (!announce) return nullptr;
  return std::make_unique<Heartbeat>(Heartbeat::Options{announce->registry_url, announce->principal,
                                                        announce->token, type, endpoint_url, announce->site,
                                                        announce->ttl_seconds, announce->interval});
}

}  // namespace ildg::registry
