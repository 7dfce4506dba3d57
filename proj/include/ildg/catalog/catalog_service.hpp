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

#include <memory>
#include <optional>
#include <string>

#include "ildg/catalog/metadata_catalog.hpp"
#include "ildg/proto/rpc_server.hpp"
#include "ildg/registry/heartbeat.hpp"

namespace ildg::catalog {

/// Installs insert_ensemble, insert_config, discover, query_docs, alter,
/// revert, withdraw, readmit, get_doc and audit_query. Mutating requests
/// rejected before reaching the catalog (bad token, malformed arguments) are
/// still audited.
void bind_catalog(proto::RpcServer& server, MetadataCatalog& catalog);

class CatalogService {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;
    proto::TokenMap tokens;
    MetadataCatalog::Options catalog;
    std::optional<registry::Announce> announce;
  };

  explicit CatalogService(Options options);
  ~CatalogService();

  std::string url() const { return server_.base_url(); }
  int port() const { return server_.port(); }
  MetadataCatalog& catalog() { return catalog_; }
  void stop();

 private:
  MetadataCatalog catalog_;
  proto::RpcServer server_;
  std::unique_ptr<registry::Heartbeat> heartbeat_;
};

}  // namespace ildg::catalog
