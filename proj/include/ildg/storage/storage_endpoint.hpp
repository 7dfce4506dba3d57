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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ildg/core/clock.hpp"
#include "ildg/core/surl.hpp"
#include "ildg/proto/rpc_client.hpp"
#include "ildg/proto/rpc_server.hpp"
#include "ildg/registry/heartbeat.hpp"
#include "ildg/storage/transfer_request.hpp"

namespace ildg::storage {

struct StoreConfig {
  std::filesystem::path root;
  std::chrono::milliseconds stage_delay{0};
  std::chrono::seconds pin_lifetime{600};
  std::string host = "127.0.0.1";
  int port = 0;
  std::string advertised_host;  // host used in SURLs and URLs; defaults to `host`
  std::string site;
};

// Test hooks on the bulk data plane. A hook sees each chunk before it is
// stored (upload) or sent (download), may rewrite it in place, and returns
// false to drop the connection.
struct FaultHooks {
  std::function<bool(std::span<char>)> on_upload_chunk;
  std::function<bool(std::span<char>)> on_download_chunk;
};

struct TransferSnapshot {
  std::string request_id;
  Direction direction = Direction::Get;
  std::string surl;
  TransferState state = TransferState::Requested;
  std::optional<std::string> transfer_token;
  std::optional<std::string> transfer_url;
  std::optional<TimePoint> pin_expires_at;
  std::optional<std::string> failure_reason;
};

nlohmann::json to_json(const TransferSnapshot& snapshot);
TransferSnapshot transfer_snapshot_from_json(const nlohmann::json& j);

struct PutTicket {
  std::string request_id;
  std::string transfer_token;
  std::string upload_url;
};

/// Directory under the root holding uncommitted payloads.
inline constexpr const char* kTempDirName = ".ildg-tmp";

// Simulated mass store. Files live under the root at their SURL path and only
// appear there by atomic rename of a fully written and verified temp file.
class StorageEndpoint {
 public:
  struct Options {
    StoreConfig config;
    proto::TokenMap tokens;
    std::shared_ptr<const Clock> clock;
    std::optional<registry::Announce> announce;
    proto::CallOptions pull_options;
  };

  explicit StorageEndpoint(Options options);
  ~StorageEndpoint();
  StorageEndpoint(const StorageEndpoint&) = delete;
  StorageEndpoint& operator=(const StorageEndpoint&) = delete;

  PutTicket request_put(const std::string& surl);
  void commit_put(const std::string& request_id, const std::string& crc32);
  /// Compensation for a put or copy: cancels any open request writing the
  /// path and deletes the stored file if its checksum is `crc32`. NOT_FOUND
  /// when nothing is there.
  void abort_put(const std::string& surl, const std::string& crc32);
  std::string request_get(const std::string& surl);
  TransferSnapshot status(const std::string& request_id);
  TimePoint extend_pin(const std::string& request_id, std::int64_t extra_seconds);
  std::string request_copy(const std::string& dest_surl, const std::string& source_url,
                           const std::string& expected_crc32);

  /// srm://<advertised host>:<port>/<path>
  std::string surl_for(const std::string& path) const;
  std::string url() const;
  int port() const { return port_; }
  const std::string& site() const { return config_.site; }
  const std::filesystem::path& root() const { return config_.root; }

  void set_fault_hooks(FaultHooks hooks);

  /// Simulated kill -9: the listener goes away and in-flight work is
  /// abandoned before anything is renamed into place. Not callable from a
  /// request handler.
  void crash();
  void stop();

 private:
  struct Slot {
    TransferRequest request;
    std::filesystem::path target;       // final location
    std::filesystem::path temp;         // put and copy only
    bool uploading = false;
    bool uploaded = false;
    bool downloading = false;
  };

  std::filesystem::path local_path(const std::string& surl) const;
  std::string new_id();
  Slot& find(const std::string& request_id);
  Slot* find_by_token(const std::string& token);
  void release(Slot& slot);
  bool occupied(const std::filesystem::path& target) const;
  void run_copy(std::string request_id, std::string source_url, std::string expected_crc32);
  void install_routes();
  FaultHooks hooks() const;

  StoreConfig config_;
  std::shared_ptr<const Clock> clock_;
  proto::CallOptions pull_options_;
  std::filesystem::path temp_dir_;
  proto::RpcServer server_;
  int port_ = 0;

  mutable std::mutex mu_;
  std::map<std::string, Slot> requests_;
  std::map<std::string, std::string> tokens_;  // transfer token -> request id
  std::set<std::filesystem::path> reserved_;
  FaultHooks hooks_;

  std::atomic<bool> dead_{false};
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::unique_ptr<registry::Heartbeat> heartbeat_;
};

/// Installs the control operations on `server`.
void bind_storage_endpoint(proto::RpcServer& server, StorageEndpoint& endpoint);

}  // namespace ildg::storage
