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

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ildg/core/clock.hpp"

namespace ildg::proto {

enum class ServiceType { Registry, MetadataCatalog, ReplicaCatalog, StorageEndpoint };

std::string_view service_type_name(ServiceType type);
std::optional<ServiceType> parse_service_type(std::string_view name);

struct ServiceDescriptor {
  ServiceType type = ServiceType::Registry;
  std::string endpoint_url;
  std::string site;
  TimePoint expires_at;

  bool operator==(const ServiceDescriptor&) const = default;
};

/// http(s)://host[:port][/path], host non-empty.
bool is_absolute_url(std::string_view url);

/// "http://h:1234/x" -> "h:1234"; empty when not absolute.
std::string url_authority(std::string_view url);

nlohmann::json to_json(const ServiceDescriptor& descriptor);
ServiceDescriptor descriptor_from_json(const nlohmann::json& j);

}  // namespace ildg::proto
