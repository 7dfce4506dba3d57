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

#include "ildg/catalog/metadata_catalog.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "ildg/catalog/predicate.hpp"
#include "ildg/core/gfn.hpp"

namespace ildg::catalog {

using nlohmann::json;

namespace {

std::int64_t to_ms(TimePoint t) { return t.time_since_epoch().count(); }
TimePoint from_ms(std::int64_t ms) { return TimePoint{std::chrono::milliseconds{ms}}; }

std::string project_key(const EnsembleMetadata& e) {
  return ensemble_authority(e.ensemble_id) + "/" + percent_encode(e.project_name);
}

json effect_ensemble(const EnsembleMetadata& e) {
  return {{"type", "ensemble"}, {"id", e.ensemble_id}, {"doc", serialize_doc(e)}};
}

json effect_config(const std::string& gfn, const ConfigurationMetadata& c) {
  return {{"type", "config"}, {"gfn", gfn}, {"doc", serialize_doc(c)}};
}

json effect_flag(const std::string& gfn, bool withdrawn) {
  return {{"type", "flag"}, {"gfn", gfn}, {"withdrawn", withdrawn}};
}

}  // namespace

json to_json(const AuditRecord& r) {
  return {{"timestamp", format_timestamp(r.timestamp)},
          {"principal", r.principal},
          {"operation", r.operation},
          {"target", r.target},
          {"outcome", r.outcome},
          {"detail", r.detail}};
}

AuditRecord audit_record_from_json(const json& j) {
  AuditRecord r;
  auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
  if (!ts) fail(ErrorCode::ParseError, "malformed audit timestamp");
  r.timestamp = *ts;
  j.at("principal").get_to(r.principal);
  j.at("operation").get_to(r.operation);
  j.at("target").get_to(r.target);
  j.at("outcome").get_to(r.outcome);
  j.at("detail").get_to(r.detail);
  return r;
}

bool MetadataCatalog::is_mutating(std::string_view op) {
  return op == "insert_ensemble" || op == "insert_config" || op == "alter" || op == "revert" ||
         op == "withdraw" || op == "readmit" || op == "record_transfer";
}

MetadataCatalog::MetadataCatalog(Options options)
    : clock_(options.clock ? options.clock : system_clock()),
      journal_(options.data_dir, options.journal) {
  recover();
}

TimePoint MetadataCatalog::stamp() {
  last_stamp_ = std::max(last_stamp_, clock_->now());
  return last_stamp_;
}

template <class Plan>
auto MetadataCatalog::mutate(const std::string& principal, const std::string& operation, std::string target,
                             json args, Plan&& plan) {
  std::unique_lock lock(mu_);
  const TimePoint ts = stamp();
  json record{{"ts", to_ms(ts)},
              {"envelope", {{"principal", principal}, {"operation", operation}, {"args", std::move(args)}}}};
  try {
    auto planned = plan(target);
    record["target"] = target;
    record["outcome"] = "ok";
    record["detail"] = planned.detail;
    record["effect"] = planned.effect;
    journal_.append(record);
    apply_effect(planned.effect);
    audit_.push_back({ts, principal, operation, target, "ok", planned.detail});
    maybe_snapshot();
    return planned.result;
  } catch (const GridError& e) {
    record["target"] = target;
    append_failure(std::move(record), {ts, principal, operation, target, std::string(error_code_name(e.code())), e.what()});
    throw;
  }
}

void MetadataCatalog::append_failure(json record, const AuditRecord& audit) {
  record["outcome"] = audit.outcome;
  record["detail"] = audit.detail;
  record["effect"] = nullptr;
  journal_.append(std::move(record));
  audit_.push_back(audit);
  maybe_snapshot();
}

void MetadataCatalog::maybe_snapshot() {
  if (journal_.snapshot_due()) journal_.write_snapshot(snapshot_state());
}

void MetadataCatalog::record_failure(const std::string& principal, const std::string& operation,
                                     const std::string& target, ErrorCode code, const std::string& message) {
  std::unique_lock lock(mu_);
  const TimePoint ts = stamp();
  json record{{"ts", to_ms(ts)},
              {"envelope", {{"principal", principal}, {"operation", operation}, {"args", json::object()}}},
              {"target", target}};
  append_failure(std::move(record), {ts, principal, operation, target, std::string(error_code_name(code)), message});
}

void MetadataCatalog::record_transfer(const std::string& principal, const std::string& command,
                                      const std::string& target, const std::string& outcome,
                                      const std::string& detail) {
  if (command != "add" && command != "replicate") fail(ErrorCode::QueryError, "unknown transfer command " + command);
  if (outcome != "ok" && !parse_error_code(outcome)) fail(ErrorCode::QueryError, "unknown outcome " + outcome);
  if (command == "add" && outcome == "ok") fail(ErrorCode::QueryError, "a successful add is recorded by its insert");
  std::unique_lock lock(mu_);
  const TimePoint ts = stamp();
  json record{{"ts", to_ms(ts)},
              {"envelope", {{"principal", principal}, {"operation", command}, {"args", json::object()}}},
              {"target", target}};
  append_failure(std::move(record), {ts, principal, command, target, outcome, detail});
}

void MetadataCatalog::apply_effect(const json& effect) {
  if (effect.is_null()) return;
  const auto type = effect.at("type").get<std::string>();
  if (type == "ensemble") {
    EnsembleMetadata e = parse_ensemble_doc(effect.at("doc").get<std::string>());
    auto& entry = ensembles_[e.ensemble_id];
    if (entry.versions.empty()) project_owners_[project_key(e)] = e.ensemble_id;
    entry.versions.push_back(std::move(e));
  } else if (type == "config") {
    configs_[effect.at("gfn").get<std::string>()].versions.push_back(
        parse_config_doc(effect.at("doc").get<std::string>()));
  } else if (type == "flag") {
    configs_.at(effect.at("gfn").get<std::string>()).withdrawn = effect.at("withdrawn").get<bool>();
  } else {
    throw std::runtime_error("unknown journal effect " + type);
  }
}

json MetadataCatalog::snapshot_state() const {
  json ensembles = json::object();
  for (const auto& [id, entry] : ensembles_) {
    json versions = json::array();
    for (const auto& v : entry.versions) versions.push_back(serialize_doc(v));
    ensembles[id] = std::move(versions);
  }
  json configs = json::object();
  for (const auto& [gfn, entry] : configs_) {
    json versions = json::array();
    for (const auto& v : entry.versions) versions.push_back(serialize_doc(v));
    configs[gfn] = {{"withdrawn", entry.withdrawn}, {"versions", std::move(versions)}};
  }
  json audit = json::array();
  for (const auto& r : audit_) audit.push_back(to_json(r));
  return {{"ensembles", std::move(ensembles)},
          {"configs", std::move(configs)},
          {"audit", std::move(audit)},
          {"lastStamp", to_ms(last_stamp_)}};
}

void MetadataCatalog::load_snapshot(const json& snapshot) {
  for (const auto& [id, versions] : snapshot.at("ensembles").items()) {
    for (const auto& doc : versions) apply_effect({{"type", "ensemble"}, {"doc", doc}});
  }
  for (const auto& [gfn, entry] : snapshot.at("configs").items()) {
    for (const auto& doc : entry.at("versions")) apply_effect({{"type", "config"}, {"gfn", gfn}, {"doc", doc}});
    configs_.at(gfn).withdrawn = entry.at("withdrawn").get<bool>();
  }
  for (const auto& r : snapshot.at("audit")) audit_.push_back(audit_record_from_json(r));
  last_stamp_ = from_ms(snapshot.at("lastStamp").get<std::int64_t>());
}

void MetadataCatalog::recover() {
  std::unique_lock lock(mu_);
  auto recovered = journal_.recover();
  if (recovered.snapshot) load_snapshot(*recovered.snapshot);
  for (const auto& record : recovered.records) {
    const TimePoint ts = from_ms(record.at("ts").get<std::int64_t>());
    const auto& envelope = record.at("envelope");
    const auto outcome = record.at("outcome").get<std::string>();
    if (outcome == "ok") apply_effect(record.at("effect"));
    audit_.push_back({ts, envelope.at("principal").get<std::string>(), envelope.at("operation").get<std::string>(),
                      record.at("target").get<std::string>(), outcome, record.at("detail").get<std::string>()});
    last_stamp_ = std::max(last_stamp_, ts);
  }
}

std::string MetadataCatalog::insert_ensemble(const std::string& principal, std::string_view document) {
  return mutate(principal, "insert_ensemble", "-", {{"document", document}}, [&](std::string& target) {
    EnsembleMetadata e = parse_ensemble_doc(document);
    target = e.ensemble_id;
    if (ensembles_.contains(e.ensemble_id)) {
      fail(ErrorCode::DuplicateEnsemble, "ensemble " + e.ensemble_id + " already exists");
    }
    if (auto it = project_owners_.find(project_key(e)); it != project_owners_.end()) {
      fail(ErrorCode::DuplicateEnsemble, "project '" + e.project_name + "' under " +
                                             ensemble_authority(e.ensemble_id) + " already belongs to ensemble " +
                                             it->second);
    }
    return Planned<std::string>{effect_ensemble(e), e.ensemble_id, "version 1"};
  });
}

std::int64_t MetadataCatalog::insert_config(const std::string& principal, std::string_view document,
                                            const std::string& gfn) {
  return mutate(principal, "insert_config", gfn, {{"document", document}, {"gfn", gfn}}, [&](std::string&) {
    ConfigurationMetadata c = parse_config_doc(document);
    auto ens = ensembles_.find(c.ensemble_id);
    if (ens == ensembles_.end()) {
      fail(ErrorCode::EnsembleNotFound, "ensemble " + c.ensemble_id + " has not been exported");
    }
    const std::string derived = derive_gfn(c, ens->second.versions.back()).str();
    if (derived != gfn) fail(ErrorCode::KeyMismatch, "document derives " + derived + ", not " + gfn);
    if (configs_.contains(gfn)) fail(ErrorCode::DuplicateGfn, gfn + " already exists");
    return Planned<std::int64_t>{effect_config(gfn, c), 1, "version 1"};
  });
}

std::int64_t MetadataCatalog::alter(const std::string& principal, const std::string& target,
                                    std::string_view document, std::int64_t expected_version) {
  json args{{"target", target}, {"document", document}, {"expectedVersion", expected_version}};
  return mutate(principal, "alter", target, std::move(args), [&](std::string&) {
    auto check_version = [&](std::size_t latest) {
      if (expected_version != static_cast<std::int64_t>(latest)) {
        fail(ErrorCode::VersionConflict, "expected version " + std::to_string(expected_version) +
                                             " but latest is " + std::to_string(latest));
      }
      const auto next = static_cast<std::int64_t>(latest) + 1;
      return std::make_pair(next, "version " + std::to_string(next));
    };
    if (auto it = ensembles_.find(target); it != ensembles_.end()) {
      EnsembleMetadata e = parse_ensemble_doc(document);
      const auto& current = it->second.versions.back();
      if (e.ensemble_id != target) fail(ErrorCode::KeyMismatch, "ensembleId cannot change");
      if (e.project_name != current.project_name) fail(ErrorCode::KeyMismatch, "projectName cannot change");
      auto [next, detail] = check_version(it->second.versions.size());
      return Planned<std::int64_t>{effect_ensemble(e), next, detail};
    }
    if (auto it = configs_.find(target); it != configs_.end()) {
      ConfigurationMetadata c = parse_config_doc(document);
      const auto& current = it->second.versions.back();
      if (natural_key(c) != natural_key(current)) {
        fail(ErrorCode::KeyMismatch, "ensembleId, series and update cannot change");
      }
      if (c.crc32 != current.crc32 || c.size != current.size) {
        fail(ErrorCode::KeyMismatch, "crc32 and size describe the stored data and cannot change");
      }
      auto [next, detail] = check_version(it->second.versions.size());
      return Planned<std::int64_t>{effect_config(target, c), next, detail};
    }
    fail(ErrorCode::NotFound, "no ensemble or configuration " + target);
  });
}

std::int64_t MetadataCatalog::revert(const std::string& principal, const std::string& target,
                                     std::int64_t to_version) {
  json args{{"target", target}, {"toVersion", to_version}};
  return mutate(principal, "revert", target, std::move(args), [&](std::string&) {
    auto check = [&](std::size_t latest) {
      if (to_version < 1) fail(ErrorCode::NotFound, "no version " + std::to_string(to_version));
      if (latest < 2 || to_version >= static_cast<std::int64_t>(latest)) {
        fail(ErrorCode::NothingToRevert, "latest version is " + std::to_string(latest) +
                                             "; nothing older than it to restore from version " +
                                             std::to_string(to_version));
      }
      const auto next = static_cast<std::int64_t>(latest) + 1;
      return std::make_pair(next, "version " + std::to_string(next) + " restores version " + std::to_string(to_version));
    };
    if (auto it = ensembles_.find(target); it != ensembles_.end()) {
      auto [next, detail] = check(it->second.versions.size());
      return Planned<std::int64_t>{effect_ensemble(it->second.versions[static_cast<std::size_t>(to_version - 1)]),
                                   next, detail};
    }
    if (auto it = configs_.find(target); it != configs_.end()) {
      auto [next, detail] = check(it->second.versions.size());
      return Planned<std::int64_t>{
          effect_config(target, it->second.versions[static_cast<std::size_t>(to_version - 1)]), next, detail};
    }
    fail(ErrorCode::NotFound, "no ensemble or configuration " + target);
  });
}

void MetadataCatalog::withdraw(const std::string& principal, const std::string& gfn) {
  mutate(principal, "withdraw", gfn, {{"gfn", gfn}}, [&](std::string&) {
    if (!configs_.contains(gfn)) fail(ErrorCode::NotFound, "no configuration " + gfn);
    return Planned<bool>{effect_flag(gfn, true), true, "withdrawn"};
  });
}

void MetadataCatalog::readmit(const std::string& principal, const std::string& gfn) {
  mutate(principal, "readmit", gfn, {{"gfn", gfn}}, [&](std::string&) {
    if (!configs_.contains(gfn)) fail(ErrorCode::NotFound, "no configuration " + gfn);
    return Planned<bool>{effect_flag(gfn, false), true, "readmitted"};
  });
}

std::vector<FlatRecord> MetadataCatalog::select(std::string_view predicate, bool include_withdrawn) const {
  const Predicate p = Predicate::parse(predicate);
  std::vector<FlatRecord> out;
  std::shared_lock lock(mu_);
  for (const auto& [gfn, entry] : configs_) {
    if (entry.withdrawn && !include_withdrawn) continue;
    const auto& config = entry.versions.back();
    const auto& ensemble = ensembles_.at(config.ensemble_id).versions.back();
    FlatRecord record = flatten(config, ensemble, entry.withdrawn, static_cast<std::int64_t>(entry.versions.size()));
    if (p.matches(record)) out.push_back(std::move(record));
  }
  return out;
}

std::vector<FlatRecord> MetadataCatalog::discover(std::string_view predicate, bool include_withdrawn) const {
  return select(predicate, include_withdrawn);
}

std::vector<DocEntry> MetadataCatalog::query_docs(std::string_view predicate, DocKind kind,
                                                  bool include_withdrawn) const {
  const auto records = select(predicate, include_withdrawn);
  std::vector<DocEntry> out;
  std::shared_lock lock(mu_);
  if (kind == DocKind::Configuration) {
    for (const auto& r : records) {
      const auto& entry = configs_.at(r.gfn);
      out.push_back({r.gfn, static_cast<std::int64_t>(entry.versions.size()), serialize_doc(entry.versions.back()), r});
    }
    return out;
  }
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.ensemble_id);
  for (const auto& id : ids) {
    const auto& entry = ensembles_.at(id);
    out.push_back({id, static_cast<std::int64_t>(entry.versions.size()), serialize_doc(entry.versions.back()), std::nullopt});
  }
  return out;
}

const MetadataCatalog::EnsembleEntry* MetadataCatalog::find_ensemble_for(const std::string& target) const {
  if (auto it = ensembles_.find(target); it != ensembles_.end()) return &it->second;
  if (auto it = configs_.find(target); it != configs_.end()) {
    return &ensembles_.at(it->second.versions.back().ensemble_id);
  }
  return nullptr;
}

VersionedDoc MetadataCatalog::get_doc(const std::string& target, DocKind kind,
                                      std::optional<std::int64_t> version) const {
  std::shared_lock lock(mu_);
  auto pick = [&](const auto& versions) -> VersionedDoc {
    const auto latest = static_cast<std::int64_t>(versions.size());
    const std::int64_t v = version.value_or(latest);
    if (v < 1 || v > latest) fail(ErrorCode::NotFound, target + " has no version " + std::to_string(v));
    return {serialize_doc(versions[static_cast<std::size_t>(v - 1)]), v};
  };
  if (kind == DocKind::Ensemble) {
    const EnsembleEntry* entry = find_ensemble_for(target);
    if (!entry) fail(ErrorCode::NotFound, "no ensemble " + target);
    return pick(entry->versions);
  }
  auto it = configs_.find(target);
  if (it == configs_.end()) fail(ErrorCode::NotFound, "no configuration " + target);
  return pick(it->second.versions);
}

std::vector<AuditRecord> MetadataCatalog::audit_query(const AuditFilter& f) const {
  if (f.since && f.until && *f.since > *f.until) fail(ErrorCode::QueryError, "time range ends before it starts");
  std::vector<AuditRecord> out;
  std::shared_lock lock(mu_);
  for (const auto& r : audit_) {
    if (f.principal && r.principal != *f.principal) continue;
    if (f.operation && r.operation != *f.operation) continue;
    if (f.target && r.target != *f.target) continue;
    if (f.since && r.timestamp < *f.since) continue;
    if (f.until && r.timestamp > *f.until) continue;
    out.push_back(r);
  }
  return out;
}

std::size_t MetadataCatalog::audit_size() const {
  std::shared_lock lock(mu_);
  return audit_.size();
}

}  // namespace ildg::catalog
