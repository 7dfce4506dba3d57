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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ildg/client/client_config.hpp"
#include "ildg/core/error.hpp"
#include "ildg/core/flatten.hpp"
#include "ildg/core/template.hpp"
#include "ildg/proto/rpc_client.hpp"
#include "ildg/proto/service_descriptor.hpp"

namespace ildg::client {

// Called before each network step of a command, named like "add.upload" or
// "replicate.request_copy". Throwing from it fails that step.
struct ClientHooks {
  std::function<void(std::string_view step)> before_step;
};

/// Outcome of one file within a multi-file command.
struct FileResult {
  std::string gfn;
  std::string label;  // project:series:update
  std::string path;   // local file written, when any
  std::optional<ErrorCode> error;
  std::string message;  // error text or warning
  bool warning = false;
};

struct BatchResult {
  std::vector<FileResult> files;  // ordered by gfn
  bool ok() const;
};

// What a user-facing configuration points at: a catalog entry named by
// (project, series, update), or an ensemble by its id.
struct Target {
  std::string project_name;
  std::string series;
  std::int64_t update = 0;
  std::string ensemble_id;  // set for ensemble targets only

  static Target configuration(std::string project, std::string series, std::int64_t update);
  static Target ensemble(std::string ensemble_id);
  bool is_ensemble() const { return !ensemble_id.empty(); }
};

struct AuditQuery {
  std::optional<std::string> principal;
  std::optional<std::string> operation;
  std::optional<std::string> target;
  std::optional<std::string> since;
  std::optional<std::string> until;
};

std::string record_label(const FlatRecord& record);

// Orchestrates the grid services for one user. Only the registry address is
// configured; catalogs and storage endpoints are looked up per command.
class GridClient {
 public:
  explicit GridClient(ClientConfig config, ClientHooks hooks = {});

  void set_observer(proto::RpcClient::Observer observer) { rpc_.set_observer(std::move(observer)); }
  const ClientConfig& config() const { return config_; }

  /// Live services of one type, ordered by site then URL.
  std::vector<proto::ServiceDescriptor> services(proto::ServiceType type) const;
  /// Same-site service first, else the first listed. NOT_FOUND when none.
  std::string service_url(proto::ServiceType type) const;

  std::string export_ensemble(const std::filesystem::path& document);
  /// Returns the GFN of the new configuration.
  std::string add(const std::filesystem::path& data, const std::filesystem::path& metadata,
                  const std::string& destination_surl);
  std::vector<FlatRecord> discover(const std::string& predicate, bool include_withdrawn = false) const;
  BatchResult get(const std::string& predicate, const FilenameTemplate& tmpl, int parallel = 1);
  BatchResult query(const std::string& predicate, const FilenameTemplate& tmpl, bool include_withdrawn = false,
                    int parallel = 1);
  /// `destination` is a site name or a storage endpoint URL.
  BatchResult replicate(const std::string& predicate, const std::string& destination, int parallel = 1);

  /// Returns the new version. Without `expected_version` the current one is
  /// read first.
  std::int64_t alter(const Target& target, const std::filesystem::path& document,
                     std::optional<std::int64_t> expected_version = std::nullopt);
  std::int64_t revert(const Target& target, std::int64_t to_version);
  void withdraw(const Target& target);
  void readmit(const Target& target);
  std::vector<nlohmann::json> audit(const AuditQuery& query) const;

  /// GFN of a configuration target; ensemble targets pass their id through.
  std::string resolve(const Target& target) const;

 private:
  struct AddAttempt {
    std::string catalog_url;
    std::string target;
    bool audited = false;  // the catalog answered a mutating request
  };
  std::string add_steps(const std::filesystem::path& data, const std::filesystem::path& metadata,
                        const std::string& destination_surl, AddAttempt& attempt);
  /// Best effort: a catalog that cannot be reached is not reported.
  void note_transfer(const std::string& catalog_url, const std::string& command, const std::string& target,
                     const std::string& outcome, const std::string& detail) const;
  void step(std::string_view name) const;
  nlohmann::json catalog(const std::string& operation, nlohmann::json args) const;
  std::string storage_url_for(const std::string& surl) const;
  proto::ServiceDescriptor storage_for_destination(const std::string& destination) const;
  /// Polls status until `want` or a terminal state; returns the last status.
  nlohmann::json await_state(const std::string& endpoint_url, const std::string& request_id,
                             std::string_view want) const;
  void fetch_replica(const nlohmann::json& replica, const FlatRecord& record, const std::filesystem::path& dest);
  FileResult get_one(const FlatRecord& record, const FilenameTemplate& tmpl);
  FileResult replicate_one(const FlatRecord& record, const proto::ServiceDescriptor& dest);
  BatchResult run_batch(const std::vector<FlatRecord>& records, int parallel,
                        const std::function<FileResult(const FlatRecord&)>& work);

  ClientConfig config_;
  ClientHooks hooks_;
  proto::RpcClient rpc_;
};

}  // namespace ildg::client
