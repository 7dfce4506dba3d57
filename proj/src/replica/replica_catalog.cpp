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

#include "ildg/replica/replica_catalog.hpp"

#include <algorithm>

#include "ildg/core/crc32.hpp"
#include "ildg/core/error.hpp"
#include "ildg/core/gfn.hpp"
#include "ildg/core/metadata.hpp"
#include "ildg/core/surl.hpp"

namespace ildg::replica {

using nlohmann::json;

json to_json(const ReplicaEntry& e) {
  return {{"gfn", e.gfn},
          {"surl", e.surl},
          {"crc32", e.crc32},
          {"site", e.site},
          {"registeredAt", format_timestamp(e.registered_at)}};
}

ReplicaEntry replica_entry_from_json(const json& j) {
  ReplicaEntry e;
  j.at("gfn").get_to(e.gfn);
  j.at("surl").get_to(e.surl);
  j.at("crc32").get_to(e.crc32);
  j.at("site").get_to(e.site);
  auto ts = parse_timestamp(j.at("registeredAt").get<std::string>());
  if (!ts) fail(ErrorCode::ParseError, "malformed registeredAt");
  e.registered_at = *ts;
  return e;
}

ReplicaCatalog::ReplicaCatalog(Options options)
    : clock_(options.clock ? options.clock : system_clock()), journal_(options.data_dir, options.journal) {
  std::lock_guard lock(mu_);
  auto recovered = journal_.recover();
  if (recovered.snapshot) {
    for (const auto& e : recovered.snapshot->at("entries")) apply({{"op", "register"}, {"entry", e}});
  }
  for (const auto& record : recovered.records) apply(record.at("effect"));
}

void ReplicaCatalog::apply(const json& effect) {
  const auto op = effect.at("op").get<std::string>();
  if (op == "register") {
    ReplicaEntry e = replica_entry_from_json(effect.at("entry"));
    entries_[e.gfn][e.surl] = e;
  } else if (op == "unregister") {
    const auto gfn = effect.at("gfn").get<std::string>();
    auto it = entries_.find(gfn);
    if (it != entries_.end()) {
      it->second.erase(effect.at("surl").get<std::string>());
      if (it->second.empty()) entries_.erase(it);
    }
  } else {
    throw std::runtime_error("unknown replica journal op " + op);
  }
}

void ReplicaCatalog::persist(json effect) {
  journal_.append({{"effect", effect}});
  apply(effect);
  if (journal_.snapshot_due()) journal_.write_snapshot(snapshot_state());
}

json ReplicaCatalog::snapshot_state() const {
  json entries = json::array();
  for (const auto& [gfn, by_surl] : entries_) {
    for (const auto& [surl, e] : by_surl) entries.push_back(to_json(e));
  }
  return {{"entries", std::move(entries)}};
}

bool ReplicaCatalog::register_replica(const std::string& gfn, const std::string& surl, const std::string& crc32,
                                      const std::string& site) {
  if (!GlobalFileName::parse(gfn)) fail(ErrorCode::QueryError, "malformed GFN '" + gfn + "'");
  if (!Surl::parse(surl)) fail(ErrorCode::QueryError, "malformed SURL '" + surl + "'");
  if (!is_crc32_hex(crc32)) fail(ErrorCode::QueryError, "crc32 must be 8 lowercase hex digits");
  if (!is_clean_text(site)) fail(ErrorCode::QueryError, "site must be non-empty text");

  std::lock_guard lock(mu_);
  if (auto it = entries_.find(gfn); it != entries_.end()) {
    if (auto same = it->second.find(surl); same != it->second.end()) {
      if (same->second.crc32 != crc32) {
        fail(ErrorCode::DuplicateGfn, surl + " is already registered for " + gfn + " with checksum " +
                                          same->second.crc32);
      }
      return false;
    }
    const auto& authoritative = it->second.begin()->second.crc32;
    if (authoritative != crc32) {
      fail(ErrorCode::QueryError, "checksum " + crc32 + " disagrees with " + authoritative + " recorded for " + gfn);
    }
  }
  persist({{"op", "register"}, {"entry", to_json(ReplicaEntry{gfn, surl, crc32, site, clock_->now()})}});
  return true;
}

std::vector<ReplicaEntry> ReplicaCatalog::list_replicas(const std::string& gfn) const {
  std::vector<ReplicaEntry> out;
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(gfn); it != entries_.end()) {
      for (const auto& [surl, e] : it->second) out.push_back(e);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ReplicaEntry& a, const ReplicaEntry& b) { return a.site < b.site; });
  return out;
}

void ReplicaCatalog::unregister_replica(const std::string& gfn, const std::string& surl) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(gfn);
  if (it == entries_.end() || !it->second.contains(surl)) {
    fail(ErrorCode::NotFound, "no replica " + surl + " for " + gfn);
  }
  persist({{"op", "unregister"}, {"gfn", gfn}, {"surl", surl}});
}

std::vector<ReplicaEntry> ReplicaCatalog::all() const {
  std::vector<ReplicaEntry> out;
  std::lock_guard lock(mu_);
  for (const auto& [gfn, by_surl] : entries_) {
    for (const auto& [surl, e] : by_surl) out.push_back(e);
  }
  return out;
}

void bind_replica_catalog(proto::RpcServer& server, ReplicaCatalog& catalog) {
  using proto::arg_string;
  server.handle("register_replica", [&catalog](const proto::CallContext&, const json& args) {
    const bool added = catalog.register_replica(arg_string(args, "gfn"), arg_string(args, "surl"),
                                                arg_string(args, "crc32"), arg_string(args, "site"));
    return json{{"added", added}};
  });
  server.handle("list_replicas", [&catalog](const proto::CallContext&, const json& args) {
    json list = json::array();
    for (const auto& e : catalog.list_replicas(arg_string(args, "gfn"))) list.push_back(to_json(e));
    return json{{"replicas", std::move(list)}};
  });
  server.handle("unregister_replica", [&catalog](const proto::CallContext&, const json& args) {
    catalog.unregister_replica(arg_string(args, "gfn"), arg_string(args, "surl"));
    return json::object();
  });
}

ReplicaService::ReplicaService(Options options)
    : catalog_(std::move(options.catalog)), server_(std::move(options.tokens)) {
  bind_replica_catalog(server_, catalog_);
  server_.start(options.host, options.port);
  heartbeat_ = registry::start_heartbeat(options.announce, proto::ServiceType::ReplicaCatalog, url());
}

ReplicaService::~ReplicaService() { stop(); }

void ReplicaService::stop() {
  heartbeat_.reset();
  server_.stop();
}

}  // namespace ildg::replica
