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

#include "ildg/proto/service_descriptor.hpp"

#include "ildg/core/error.hpp"

namespace ildg::proto {

std::string_view service_type_name(ServiceType type) {
  switch (type) {
    case ServiceType::Registry: return "registry";
    case ServiceType::MetadataCatalog: return "metadata-catalog";
    case ServiceType::ReplicaCatalog: return "replica-catalog";
    case ServiceType::StorageEndpoint: return "storage-endpoint";
  }
  return "unknown";
}

std::optional<ServiceType> parse_service_type(std::string_view name) {
  for (auto t : {ServiceType::Registry, ServiceType::MetadataCatalog, ServiceType::ReplicaCatalog,
                 ServiceType::StorageEndpoint}) {
    if (service_type_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string url_authority(std::string_view url) {
  for (std::string_view scheme : {"http://", "https://"}) {
    if (url.starts_with(scheme)) {
      url.remove_prefix(scheme.size());
      return std::string(url.substr(0, url.find('/')));
    }
  }
  return {};
}

bool is_absolute_url(std::string_view url) {
  const std::string authority = url_authority(url);
  if (authority.empty() || authority.front() == ':') return false;
  for (unsigned char c : url) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return true;
}

nlohmann::json to_json(const ServiceDescriptor& d) {
  return {{"serviceType", std::string(service_type_name(d.type))},
          {"endpointURL", d.endpoint_url},
          {"site", d.site},
          {"expiresAt", format_timestamp(d.expires_at)}};
}

ServiceDescriptor descriptor_from_json(const nlohmann::json& j) {
  ServiceDescriptor d;
  auto type = parse_service_type(j.at("serviceType").get<std::string>());
  auto expires = parse_timestamp(j.at("expiresAt").get<std::string>());
  if (!type || !expires) fail(ErrorCode::ParseError, "malformed service descriptor");
  d.type = *type;
  d.endpoint_url = j.at("endpointURL").get<std::string>();
  d.site = j.at("site").get<std::string>();
  d.expires_at = *expires;
  return d;
}

}  // namespace ildg::proto
