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

#include <algorithm>

#include "ildg/registry/registry.hpp"

namespace ildg::registry {

Registry::Registry(std::shared_ptr<const Clock> clock) : clock_(std::move(clock)) {}

void Registry::purge_expired(TimePoint now) const {
  std::erase_if(entries_, [now](const auto& kv) { return kv.second.expires_at <= now; });
}

TimePoint Registry::register_service(ServiceType type, const std::string& endpoint_url, const std::string& site,
                                     std::int64_t ttl_seconds) {
  if (ttl_seconds <= 0) fail(ErrorCode::QueryError, "ttlSeconds must be positive");
  if (!proto::is_absolute_url(endpoint_url)) fail(ErrorCode::QueryError, "endpointURL must be absolute: " + endpoint_url);
  const TimePoint now = clock_->now();
  const TimePoint expires = now + std::chrono::seconds{ttl_seconds};
  std::lock_guard lock(mu_);
  purge_expired(now);
  entries_[{type, endpoint_url}] = ServiceDescriptor{type, endpoint_url, site, expires};
  return expires;
}

std::vector<ServiceDescriptor> Registry::list_services(ServiceType type) const {
  std::vector<ServiceDescriptor> out;
  {
    std::lock_guard lock(mu_);
    purge_expired(clock_->now());
    for (const auto& [key, d] : entries_) {
      if (key.first == type) out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end(), [](const ServiceDescriptor& a, const ServiceDescriptor& b) {
    return std::tie(a.site, a.endpoint_url) < std::tie(b.site, b.endpoint_url);
  });
  return out;
}

std::size_t Registry::size() const {
  std::lock_guard lock(mu_);
  purge_expired(clock_->now());
  return entries_.size();
}

namespace {

ServiceType service_type_arg(const nlohmann::json& args) {
  const auto name = proto::arg_string(args, "serviceType");
  auto type = proto::parse_service_type(name);
  if (!type) fail(ErrorCode::QueryError, "unknown serviceType '" + name + "'");
  return *type;
}

}  // namespace

void bind_registry(proto::RpcServer& server, Registry& registry) {
  server.handle("register", [&registry](const proto::CallContext&, const nlohmann::json& args) {
    const ServiceType type = service_type_arg(args);
    const TimePoint expires = registry.register_service(type, proto::arg_string(args, "endpointURL"),
                                                        proto::arg_string(args, "site"),
                                                        proto::arg_int(args, "ttlSeconds"));
    return nlohmann::json{{"expiresAt", format_timestamp(expires)}};
  });
  server.handle("list_services", [&registry](const proto::CallContext&, const nlohmann::json& args) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& d : registry.list_services(service_type_arg(args))) list.push_back(proto::to_json(d));
    return nlohmann::json{{"services", list}};
  });
}

}  // namespace ildg::registry
