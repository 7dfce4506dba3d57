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

#include "ildg/registry/registry.hpp"

namespace ildg::registry {

RegistryService::RegistryService(Options options)
    : registry_(options.clock ? options.clock : system_clock()), server_(std::move(options.tokens)) {
  bind_registry(server_, registry_);
  server_.start(options.host, options.port);
}

RegistryService::~RegistryService() { server_.stop(); }

}  // namespace ildg::registry
