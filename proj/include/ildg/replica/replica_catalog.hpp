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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ildg/core/clock.hpp"
#include "ildg/proto/rpc_server.hpp"
#include "ildg/registry/heartbeat.hpp"
#include "ildg/store/journal.hpp"

namespace ildg::replica {

struct ReplicaEntry {
  std::string gfn;
  std::string surl;
  std::string crc32;
  std::string site;
  TimePoint registered_at;

  bool operator==(const ReplicaEntry&) const = default;
};

nlohmann::json to_json(const ReplicaEntry& entry);
ReplicaEntry replica_entry_from_json(const nlohmann::json& j);

// GFN -> set of storage URLs holding byte-identical copies. The first
// registration of a GFN fixes its checksum; later replicas must agree.
class ReplicaCatalog {
 public:
  struct Options {
    std::filesystem::path data_dir;
    std::shared_ptr<const Clock> clock;
    store::JournalOptions journal;
  };

  explicit ReplicaCatalog(Options options);

  /// Returns false when the identical entry already existed.
  /// DUPLICATE_GFN: (gfn, surl) already registered with another checksum.
  /// QUERY_ERROR: malformed argument, or checksum disagrees with the GFN's.
  bool register_replica(const std::string& gfn, const std::string& surl, const std::string& crc32,
                        const std::string& site);

  /// Ordered by (site, surl); empty when unknown.
  std::vector<ReplicaEntry> list_replicas(const std::string& gfn) const;

  /// NOT_FOUND when the pair is not registered.
  void unregister_replica(const std::string& gfn, const std::string& surl);

  std::vector<ReplicaEntry> all() const;

 private:
  void apply(const nlohmann::json& effect);
  void persist(nlohmann::json effect);
  nlohmann::json snapshot_state() const;

  std::shared_ptr<const Clock> clock_;
  store::Journal journal_;
  mutable std::mutex mu_;
  std::map<std::string, std::map<std::string, ReplicaEntry>> entries_;  // gfn -> surl -> entry
};

/// Installs register_replica, list_replicas and unregister_replica.
void bind_replica_catalog(proto::RpcServer& server, ReplicaCatalog& catalog);

class ReplicaService {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;
    proto::TokenMap tokens;
    ReplicaCatalog::Options catalog;
    std::optional<registry::Announce> announce;
  };

  explicit ReplicaService(Options options);
  ~ReplicaService();

  std::string url() const { return server_.base_url(); }
  int port() const { return server_.port(); }
  ReplicaCatalog& catalog() { return catalog_; }
  void stop();

 private:
  ReplicaCatalog catalog_;
  proto::RpcServer server_;
  std::unique_ptr<registry::Heartbeat> heartbeat_;
};

}  // namespace ildg::replica
