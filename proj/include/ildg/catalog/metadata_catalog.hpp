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
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ildg/core/clock.hpp"
#include "ildg/core/error.hpp"
#include "ildg/core/flatten.hpp"
#include "ildg/core/metadata.hpp"
#include "ildg/core/qcdml.hpp"
#include "ildg/store/journal.hpp"

namespace ildg::catalog {

struct AuditRecord {
  TimePoint timestamp;
  std::string principal;
  std::string operation;
  std::string target;   // GFN, ensemble id or "-"
  std::string outcome;  // "ok" or an error code name
  std::string detail;

  bool operator==(const AuditRecord&) const = default;
};

nlohmann::json to_json(const AuditRecord& record);
AuditRecord audit_record_from_json(const nlohmann::json& j);

struct AuditFilter {
  std::optional<std::string> principal;
  std::optional<std::string> operation;
  std::optional<std::string> target;
  std::optional<TimePoint> since;  // inclusive
  std::optional<TimePoint> until;  // inclusive
};

struct VersionedDoc {
  std::string document;
  std::int64_t version = 0;
};

struct DocEntry {
  std::string target;  // GFN or ensemble id
  std::int64_t version = 0;
  std::string document;
  std::optional<FlatRecord> record;  // configuration entries only
};

// Versioned store of ensemble and configuration metadata behind a single
// flat query view.
//
// Every mutating call (successful or not) appends one journal record and one
// audit record before returning. Version lists only grow; revert appends a
// copy. Withdrawal is a catalog flag and never creates a version.
class MetadataCatalog {
 public:
  struct Options {
    std::filesystem::path data_dir;
    std::shared_ptr<const Clock> clock;  // defaults to the system clock
    store::JournalOptions journal;
  };

  /// Recovers any state already present in data_dir.
  explicit MetadataCatalog(Options options);

  std::string insert_ensemble(const std::string& principal, std::string_view document);
  std::int64_t insert_config(const std::string& principal, std::string_view document, const std::string& gfn);
  std::int64_t alter(const std::string& principal, const std::string& target, std::string_view document,
                     std::int64_t expected_version);
  std::int64_t revert(const std::string& principal, const std::string& target, std::int64_t to_version);
  void withdraw(const std::string& principal, const std::string& gfn);
  void readmit(const std::string& principal, const std::string& gfn);

  /// Audits a mutating request that failed before reaching the store
  /// (authentication, malformed arguments).
  void record_failure(const std::string& principal, const std::string& operation, const std::string& target,
                      ErrorCode code, const std::string& message);
  /// Audits the outcome of a client-orchestrated transfer ("add" that failed
  /// before its insert, or "replicate"). `outcome` is "ok" or an error code
  /// name. Changes no catalog state.
  void record_transfer(const std::string& principal, const std::string& command, const std::string& target,
                       const std::string& outcome, const std::string& detail);

  std::vector<FlatRecord> discover(std::string_view predicate, bool include_withdrawn) const;
  std::vector<DocEntry> query_docs(std::string_view predicate, DocKind kind, bool include_withdrawn) const;

  /// kind=ensemble accepts an ensemble id or a GFN (resolving to its
  /// ensemble); kind=configuration requires a GFN.
  VersionedDoc get_doc(const std::string& target, DocKind kind, std::optional<std::int64_t> version) const;

  /// Throws QUERY_ERROR when since > until.
  std::vector<AuditRecord> audit_query(const AuditFilter& filter) const;

  std::size_t audit_size() const;

  static bool is_mutating(std::string_view operation);

 private:
  struct EnsembleEntry {
    std::vector<EnsembleMetadata> versions;
  };
  struct ConfigEntry {
    std::vector<ConfigurationMetadata> versions;
    bool withdrawn = false;
  };

  template <class R>
  struct Planned {
    nlohmann::json effect;
    R result;
    std::string detail;
  };

  // Journals and audits one mutation. `plan` validates against current state
  // (and may refine the audit target) and returns the effect; only then is
  // the effect applied.
  template <class Plan>
  auto mutate(const std::string& principal, const std::string& operation, std::string target,
              nlohmann::json args, Plan&& plan);

  void append_failure(nlohmann::json record, const AuditRecord& audit);
  void maybe_snapshot();

  void apply_effect(const nlohmann::json& effect);
  void recover();
  nlohmann::json snapshot_state() const;
  void load_snapshot(const nlohmann::json& snapshot);
  TimePoint stamp();

  const EnsembleEntry* find_ensemble_for(const std::string& target) const;
  std::vector<FlatRecord> select(std::string_view predicate, bool include_withdrawn) const;

  std::shared_ptr<const Clock> clock_;
  store::Journal journal_;

  mutable std::shared_mutex mu_;
  std::map<std::string, EnsembleEntry> ensembles_;        // by ensemble id
  std::map<std::string, ConfigEntry> configs_;            // by GFN
  std::map<std::string, std::string> project_owners_;     // "authority/project" -> ensemble id
  std::vector<AuditRecord> audit_;
  TimePoint last_stamp_{};
};

}  // namespace ildg::catalog
