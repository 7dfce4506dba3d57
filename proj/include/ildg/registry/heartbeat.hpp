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
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "ildg/proto/service_descriptor.hpp"

namespace ildg::registry {

// Keeps one service descriptor alive in the registry by re-registering it
// every `interval` from a background thread. Failures are retried on the
// next beat.
class Heartbeat {
 public:
  struct Options {
    std::string registry_url;
    std::string principal;
    std::string token;
    proto::ServiceType type = proto::ServiceType::MetadataCatalog;
    std::string endpoint_url;
    std::string site;
    std::int64_t ttl_seconds = 30;
    std::chrono::milliseconds interval{10000};
  };

  explicit Heartbeat(Options options);
  ~Heartbeat();
  Heartbeat(const Heartbeat&) = delete;
  Heartbeat& operator=(const Heartbeat&) = delete;

  /// One synchronous registration; returns false if the registry refused or
  /// could not be reached.
  bool beat();
  void stop();

 private:
  Options options_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread thread_;
};

// How a service advertises itself; the type and URL come from the service.
struct Announce {
  std::string registry_url;
  std::string principal;
  std::string token;
  std::string site;
  std::int64_t ttl_seconds = 30;
  std::chrono::milliseconds interval{10000};
};

/// Null when `announce` is empty.
std::unique_ptr<Heartbeat> start_heartbeat(const std::optional<Announce>& announce, proto::ServiceType type,
                                           const std::string& endpoint_url);

}  // namespace ildg::registry
