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

#include "ildg/client/grid_client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "ildg/core/crc32.hpp"
#include "ildg/core/gfn.hpp"
#include "ildg/core/qcdml.hpp"
#include "ildg/core/surl.hpp"

namespace ildg::client {

namespace fs = std::filesystem;
using nlohmann::json;
using proto::ServiceType;

namespace {

std::string quote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool is_transport(const GridError& e) { return dynamic_cast<const proto::TransportError*>(&e) != nullptr; }

// Undo actions for completed steps, run newest first.
class Compensations {
 public:
  explicit Compensations(std::chrono::milliseconds patience) : patience_(patience) {}

  void push(std::function<void()> undo) { undo_.push_back(std::move(undo)); }

  // Transport failures are retried until the patience runs out; a service
  // answering with an error (typically NOT_FOUND) means nothing is left.
  void run() {
    for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) {
      const auto deadline = std::chrono::steady_clock::now() + patience_;
      for (;;) {
        try {
          (*it)();
          break;
        } catch (const GridError& e) {
          if (!is_transport(e) || std::chrono::steady_clock::now() >= deadline) break;
          std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
      }
    }
    undo_.clear();
  }

 private:
  std::chrono::milliseconds patience_;
  std::vector<std::function<void()>> undo_;
};

}  // namespace

bool BatchResult::ok() const {
  return std::all_of(files.begin(), files.end(), [](const FileResult& f) { return !f.error; });
}

Target Target::configuration(std::string project, std::string series, std::int64_t update) {
  Target t;
  t.project_name = std::move(project);
  t.series = std::move(series);
  t.update = update;
  return t;
}

Target Target::ensemble(std::string ensemble_id) {
  Target t;
  t.ensemble_id = std::move(ensemble_id);
  return t;
}

std::string record_label(const FlatRecord& record) {
  return record.project_name + ":" + record.series + ":" + std::to_string(record.updates);
}

GridClient::GridClient(ClientConfig config, ClientHooks hooks)
    : config_(std::move(config)), hooks_(std::move(hooks)), rpc_(config_.principal, config_.token) {}

void GridClient::step(std::string_view name) const {
  if (hooks_.before_step) hooks_.before_step(name);
}

std::vector<proto::ServiceDescriptor> GridClient::services(ServiceType type) const {
  const json result =
      rpc_.invoke(config_.registry_url, "list_services", {{"serviceType", proto::service_type_name(type)}});
  std::vector<proto::ServiceDescriptor> out;
  for (const auto& s : result.at("services")) out.push_back(proto::descriptor_from_json(s));
  return out;
}

std::string GridClient::service_url(ServiceType type) const {
  const auto list = services(type);
  if (list.empty()) {
    fail(ErrorCode::NotFound, "no " + std::string(proto::service_type_name(type)) + " service is registered");
  }
  for (const auto& s : list) {
    if (!config_.site.empty() && s.site == config_.site) return s.endpoint_url;
  }
  return list.front().endpoint_url;
}

json GridClient::catalog(const std::string& operation, json args) const {
  return rpc_.invoke(service_url(ServiceType::MetadataCatalog), operation, std::move(args));
}

std::string GridClient::storage_url_for(const std::string& surl) const {
  const auto parsed = Surl::parse(surl);
  if (!parsed) fail(ErrorCode::QueryError, "malformed SURL '" + surl + "'");
  for (const auto& s : services(ServiceType::StorageEndpoint)) {
    if (proto::url_authority(s.endpoint_url) == parsed->authority()) return s.endpoint_url;
  }
  fail(ErrorCode::NotFound, "no storage endpoint is registered for " + parsed->authority());
}

proto::ServiceDescriptor GridClient::storage_for_destination(const std::string& destination) const {
  for (const auto& s : services(ServiceType::StorageEndpoint)) {
    if (s.site == destination || s.endpoint_url == destination) return s;
  }
  fail(ErrorCode::NotFound, "no storage endpoint is registered for '" + destination + "'");
}

json GridClient::await_state(const std::string& endpoint_url, const std::string& request_id,
                             std::string_view want) const {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(config_.poll_timeout_ms);
  for (;;) {
    json status = rpc_.invoke(endpoint_url, "status", {{"requestId", request_id}});
    const auto state = status.at("state").get<std::string>();
    if (state == want) return status;
    if (state == "FAILED") {
      fail(ErrorCode::TransferFailed, "transfer failed: " + status.value("failureReason", std::string("unknown")));
    }
    if (state == "EXPIRED") fail(ErrorCode::Expired, "pin expired before the transfer started");
    if (state == "DONE") fail(ErrorCode::TransferFailed, "transfer finished before it could be used");
    if (std::chrono::steady_clock::now() >= deadline) {
      fail(ErrorCode::TransferFailed, "timed out waiting for " + std::string(want) + " (last state " + state + ")");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(config_.poll_interval_ms));
  }
}

std::string GridClient::export_ensemble(const fs::path& document) {
  const std::string text = read_text(document);
  parse_ensemble_doc(text);
  step("export.insert_ensemble");
  return catalog("insert_ensemble", {{"document", text}}).at("ensembleId").get<std::string>();
}

void GridClient::note_transfer(const std::string& catalog_url, const std::string& command, const std::string& target,
                               const std::string& outcome, const std::string& detail) const {
  try {
    rpc_.invoke(catalog_url, "record_transfer",
                {{"command", command}, {"target", target}, {"outcome", outcome}, {"detail", detail}});
  } catch (const GridError&) {
  }
}

std::string GridClient::add(const fs::path& data, const fs::path& metadata, const std::string& destination_surl) {
  AddAttempt attempt;
  try {
    return add_steps(data, metadata, destination_surl, attempt);
  } catch (const GridError& e) {
    if (!attempt.audited && !attempt.catalog_url.empty()) {
      note_transfer(attempt.catalog_url, "add", attempt.target, std::string(error_code_name(e.code())), e.what());
    }
    throw;
  }
}

std::string GridClient::add_steps(const fs::path& data, const fs::path& metadata, const std::string& destination_surl,
                                  AddAttempt& attempt) {
  const std::string text = read_text(metadata);
  std::error_code ec;
  if (!fs::is_regular_file(data, ec)) fail(ErrorCode::TransferFailed, "cannot read data file " + data.string());
  const std::string crc = crc32_of_file(data);
  const auto size = static_cast<std::int64_t>(fs::file_size(data));
  const ConfigurationMetadata config = parse_config_doc(text, IntegrityFill{crc, size});
  const std::string catalog_url = service_url(ServiceType::MetadataCatalog);
  attempt.catalog_url = catalog_url;
  attempt.target = config.ensemble_id;

  // A doomed insert is still sent so the catalog rejects (and audits) it.
  auto rejected_by_catalog = [&](const std::string& gfn, ErrorCode expected, const std::string& message) {
    try {
      rpc_.invoke(catalog_url, "insert_config", {{"document", serialize_doc(config)}, {"gfn", gfn}});
    } catch (const GridError& e) {
      attempt.audited = !is_transport(e);
      if (e.code() != expected) throw;
    }
    fail(expected, message);
  };

  step("add.get_ensemble");
  json ensemble_doc;
  try {
    ensemble_doc = rpc_.invoke(catalog_url, "get_doc", {{"target", config.ensemble_id}, {"kind", "ensemble"}});
  } catch (const GridError& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    rejected_by_catalog(config.ensemble_id, ErrorCode::EnsembleNotFound,
                        "ensemble " + config.ensemble_id + " must be exported before its data");
  }
  const EnsembleMetadata ensemble = parse_ensemble_doc(ensemble_doc.at("document").get<std::string>());

  if (config.crc32 != crc || config.size != size) {
    fail(ErrorCode::TransferFailed, "data file does not match its document: crc32 " + crc + ", size " +
                                        std::to_string(size) + " vs " + config.crc32 + ", " +
                                        std::to_string(config.size));
  }
  const std::string gfn = derive_gfn(config, ensemble).str();
  attempt.target = gfn;

  step("add.check_gfn");
  bool duplicate = true;
  try {
    rpc_.invoke(catalog_url, "get_doc", {{"target", gfn}, {"kind", "configuration"}});
  } catch (const GridError& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    duplicate = false;
  }
  if (duplicate) {
    rejected_by_catalog(gfn, ErrorCode::DuplicateGfn,
                        record_label(flatten(config, ensemble, false, 1)) + " is already catalogued");
  }

  const std::string endpoint = storage_url_for(destination_surl);
  std::string site;
  for (const auto& s : services(ServiceType::StorageEndpoint)) {
    if (s.endpoint_url == endpoint) site = s.site;
  }
  const std::string replica_url = service_url(ServiceType::ReplicaCatalog);

  Compensations undo(std::chrono::milliseconds(config_.poll_timeout_ms));
  const json abort_args{{"surl", destination_surl}, {"crc32", crc}};
  auto guarded = [&](std::string_view name, const auto& action, std::function<void()> compensation) {
    step(name);
    try {
      action();
    } catch (const GridError& e) {
      if (is_transport(e) && compensation) undo.push(std::move(compensation));
      throw;
    }
    if (compensation) undo.push(std::move(compensation));
  };
  auto abort_put = [&] { rpc_.invoke(endpoint, "abort_put", abort_args); };

  try {
    json ticket;
    guarded("add.request_put", [&] { ticket = rpc_.invoke(endpoint, "request_put", {{"surl", destination_surl}}); },
            abort_put);
    guarded("add.upload", [&] { proto::put_file(ticket.at("uploadURL").get<std::string>(), data, rpc_.options()); },
            nullptr);
    guarded("add.commit_put",
            [&] { rpc_.invoke(endpoint, "commit_put", {{"requestId", ticket.at("requestId")}, {"crc32", crc}}); },
            nullptr);
    guarded("add.register_replica",
            [&] {
              rpc_.invoke(replica_url, "register_replica",
                          {{"gfn", gfn}, {"surl", destination_surl}, {"crc32", crc}, {"site", site}});
            },
            [&] { rpc_.invoke(replica_url, "unregister_replica", {{"gfn", gfn}, {"surl", destination_surl}}); });
    guarded("add.insert_config",
            [&] {
              try {
                rpc_.invoke(catalog_url, "insert_config", {{"document", serialize_doc(config)}, {"gfn", gfn}});
              } catch (const GridError& e) {
                attempt.audited = !is_transport(e);
                throw;
              }
            },
            nullptr);
  } catch (...) {
    undo.run();
    throw;
  }
  return gfn;
}

std::vector<FlatRecord> GridClient::discover(const std::string& predicate, bool include_withdrawn) const {
  const json result = catalog("discover", {{"predicate", predicate}, {"includeWithdrawn", include_withdrawn}});
  auto records = result.at("records").get<std::vector<FlatRecord>>();
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.gfn < b.gfn; });
  return records;
}

BatchResult GridClient::run_batch(const std::vector<FlatRecord>& records, int parallel,
                                  const std::function<FileResult(const FlatRecord&)>& work) {
  BatchResult batch;
  batch.files.resize(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const auto& record = records[i];
      FileResult result;
      try {
        result = work(record);
      } catch (const GridError& e) {
        result.error = e.code();
        result.message = e.what();
      } catch (const std::exception& e) {
        result.error = ErrorCode::TransferFailed;
        result.message = e.what();
      }
      result.gfn = record.gfn;
      result.label = record_label(record);
      batch.files[i] = std::move(result);
    }
  };
  const auto threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallel, 1)), 1, records.size() + 1);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return batch;
}

void GridClient::fetch_replica(const json& replica, const FlatRecord& record, const fs::path& dest) {
  const auto surl = replica.at("surl").get<std::string>();
  std::string endpoint;
  try {
    endpoint = storage_url_for(surl);
  } catch (const GridError& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    fail(ErrorCode::TransferFailed, e.what());
  }
  step("get.request_get");
  const auto id = rpc_.invoke(endpoint, "request_get", {{"surl", surl}}).at("requestId").get<std::string>();
  step("get.await_ready");
  const json status = await_state(endpoint, id, "READY");
  step("get.download");
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  fs::path part = dest;
  part += ".part";
  Crc32 crc;
  std::uint64_t received = 0;
  try {
    std::ofstream out(part, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::TransferFailed, "cannot write " + part.string());
    received = proto::get_stream(
        status.at("transferURL").get<std::string>(),
        [&](const char* data, std::size_t n) {
          crc.update(std::string_view(data, n));
          out.write(data, static_cast<std::streamsize>(n));
          return static_cast<bool>(out);
        },
        rpc_.options());
    out.close();
    if (!out) fail(ErrorCode::TransferFailed, "cannot write " + part.string());
  } catch (...) {
    std::error_code ec;
    fs::remove(part, ec);
    throw;
  }
  if (crc.hex() != record.crc32 || received != static_cast<std::uint64_t>(record.size)) {
    std::error_code ec;
    fs::remove(part, ec);
    fail(ErrorCode::TransferFailed, "checksum mismatch from " + surl + ": got " + crc.hex() + ", expected " +
                                        record.crc32);
  }
  fs::rename(part, dest);
}

FileResult GridClient::get_one(const FlatRecord& record, const FilenameTemplate& tmpl) {
  FileResult result;
  result.path = expand_template(tmpl, record);
  const std::string replica_url = service_url(ServiceType::ReplicaCatalog);
  json replicas = rpc_.invoke(replica_url, "list_replicas", {{"gfn", record.gfn}}).at("replicas");
  if (replicas.empty()) fail(ErrorCode::NoReplica, "no replica of " + record_label(record) + " is registered");
  std::vector<json> ordered(replicas.begin(), replicas.end());
  std::stable_partition(ordered.begin(), ordered.end(),
                        [&](const json& r) { return !config_.site.empty() && r.at("site") == config_.site; });
  std::optional<GridError> last;
  for (const auto& replica : ordered) {
    try {
      fetch_replica(replica, record, result.path);
      return result;
    } catch (const GridError& e) {
      last = e;
    }
  }
  throw *last;
}

BatchResult GridClient::get(const std::string& predicate, const FilenameTemplate& tmpl, int parallel) {
  const auto records = discover(predicate);
  return run_batch(records, parallel, [&](const FlatRecord& r) { return get_one(r, tmpl); });
}

BatchResult GridClient::query(const std::string& predicate, const FilenameTemplate& tmpl, bool include_withdrawn,
                              int parallel) {
  const json result = catalog(
      "query_docs", {{"predicate", predicate}, {"kind", "configuration"}, {"includeWithdrawn", include_withdrawn}});
  std::vector<FlatRecord> records;
  std::map<std::string, std::string> documents;
  for (const auto& d : result.at("documents")) {
    auto record = d.at("record").get<FlatRecord>();
    documents[record.gfn] = d.at("document").get<std::string>();
    records.push_back(std::move(record));
  }
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.gfn < b.gfn; });
  return run_batch(records, parallel, [&](const FlatRecord& record) {
    FileResult file;
    file.path = expand_template(tmpl, record);
    const fs::path dest(file.path);
    if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
    fs::path part = dest;
    part += ".part";
    {
      std::ofstream out(part, std::ios::binary | std::ios::trunc);
      out << documents.at(record.gfn);
      out.close();
      if (!out) {
        std::error_code ec;
        fs::remove(part, ec);
        fail(ErrorCode::TransferFailed, "cannot write " + dest.string());
      }
    }
    fs::rename(part, dest);
    return file;
  });
}

FileResult GridClient::replicate_one(const FlatRecord& record, const proto::ServiceDescriptor& dest) {
  const std::string replica_url = service_url(ServiceType::ReplicaCatalog);
  auto list = [&] { return rpc_.invoke(replica_url, "list_replicas", {{"gfn", record.gfn}}).at("replicas"); };
  const std::string dest_authority = proto::url_authority(dest.endpoint_url);
  auto already_there = [&](const json& replicas) {
    return std::any_of(replicas.begin(), replicas.end(), [&](const json& r) {
      auto s = Surl::parse(r.at("surl").get<std::string>());
      return s && s->authority() == dest_authority;
    });
  };

  FileResult result;
  const json replicas = list();
  if (replicas.empty()) fail(ErrorCode::NoReplica, "no replica of " + record_label(record) + " is registered");
  if (already_there(replicas)) {
    result.warning = true;
    result.message = "already replicated at " + dest.site;
    return result;
  }

  std::optional<GridError> last;
  for (const auto& source : replicas) {
    const auto source_surl = source.at("surl").get<std::string>();
    Compensations undo(std::chrono::milliseconds(config_.poll_timeout_ms));
    try {
      std::string source_endpoint;
      try {
        source_endpoint = storage_url_for(source_surl);
      } catch (const GridError& e) {
        if (e.code() != ErrorCode::NotFound) throw;
        fail(ErrorCode::TransferFailed, e.what());
      }
      const auto relocated = Surl::parse("srm://" + dest_authority + "/" + Surl::parse(source_surl)->path);
      if (!relocated) fail(ErrorCode::QueryError, "destination " + dest.endpoint_url + " has no host:port");
      const std::string dest_surl = relocated->str();

      step("replicate.request_get");
      const auto get_id =
          rpc_.invoke(source_endpoint, "request_get", {{"surl", source_surl}}).at("requestId").get<std::string>();
      step("replicate.await_source");
      const json ready = await_state(source_endpoint, get_id, "READY");

      step("replicate.request_copy");
      auto abort_copy = [&, dest_surl] {
        rpc_.invoke(dest.endpoint_url, "abort_put", {{"surl", dest_surl}, {"crc32", record.crc32}});
      };
      std::string copy_id;
      try {
        copy_id = rpc_.invoke(dest.endpoint_url, "request_copy",
                              {{"destSurl", dest_surl},
                               {"sourceTransferURL", ready.at("transferURL")},
                               {"expectedCrc32", record.crc32}})
                      .at("requestId")
                      .get<std::string>();
      } catch (const GridError& e) {
        if (e.code() == ErrorCode::DuplicateGfn && already_there(list())) {
          result.warning = true;
          result.message = "already replicated at " + dest.site;
          return result;
        }
        if (is_transport(e)) undo.push(abort_copy);
        throw;
      }
      undo.push(abort_copy);
      step("replicate.await_copy");
      await_state(dest.endpoint_url, copy_id, "DONE");

      step("replicate.register_replica");
      const bool added = rpc_.invoke(replica_url, "register_replica",
                                     {{"gfn", record.gfn}, {"surl", dest_surl}, {"crc32", record.crc32},
                                      {"site", dest.site}})
                             .at("added")
                             .get<bool>();
      if (!added) {
        result.warning = true;
        result.message = "already replicated at " + dest.site;
      }
      return result;
    } catch (const GridError& e) {
      undo.run();
      if (e.code() == ErrorCode::DuplicateGfn) throw;
      last = e;
    } catch (...) {
      undo.run();
      throw;
    }
  }
  throw *last;
}

BatchResult GridClient::replicate(const std::string& predicate, const std::string& destination, int parallel) {
  const auto dest = storage_for_destination(destination);
  const auto records = discover(predicate);
  const std::string catalog_url = service_url(ServiceType::MetadataCatalog);
  return run_batch(records, parallel, [&](const FlatRecord& r) {
    FileResult result;
    try {
      result = replicate_one(r, dest);
    } catch (const GridError& e) {
      note_transfer(catalog_url, "replicate", r.gfn, std::string(error_code_name(e.code())), e.what());
      throw;
    }
    note_transfer(catalog_url, "replicate", r.gfn, "ok", result.warning ? result.message : "copied to " + dest.site);
    return result;
  });
}

std::string GridClient::resolve(const Target& target) const {
  if (target.is_ensemble()) return target.ensemble_id;
  const std::string predicate = "projectName = " + quote(target.project_name) + " AND series = " +
                                quote(target.series) + " AND updates = " + std::to_string(target.update);
  const auto records = discover(predicate, true);
  const std::string label = target.project_name + ":" + target.series + ":" + std::to_string(target.update);
  if (records.empty()) fail(ErrorCode::NotFound, "no configuration " + label);
  if (records.size() > 1) fail(ErrorCode::QueryError, label + " is ambiguous across institutions");
  return records.front().gfn;
}

std::int64_t GridClient::alter(const Target& target, const fs::path& document,
                               std::optional<std::int64_t> expected_version) {
  std::string text = read_text(document);
  const std::string resolved = resolve(target);
  const std::string kind = target.is_ensemble() ? "ensemble" : "configuration";
  const json current = catalog("get_doc", {{"target", resolved}, {"kind", kind}});
  if (!target.is_ensemble()) {
    const auto now = parse_config_doc(current.at("document").get<std::string>());
    text = serialize_doc(parse_config_doc(text, IntegrityFill{now.crc32, now.size}));
  }
  const std::int64_t expected = expected_version.value_or(current.at("version").get<std::int64_t>());
  step("alter.alter");
  return catalog("alter", {{"target", resolved}, {"document", text}, {"expectedVersion", expected}})
      .at("version")
      .get<std::int64_t>();
}

std::int64_t GridClient::revert(const Target& target, std::int64_t to_version) {
  const std::string resolved = resolve(target);
  step("revert.revert");
  return catalog("revert", {{"target", resolved}, {"toVersion", to_version}}).at("version").get<std::int64_t>();
}

void GridClient::withdraw(const Target& target) {
  if (target.is_ensemble()) fail(ErrorCode::QueryError, "withdraw applies to configurations only");
  const std::string gfn = resolve(target);
  step("withdraw.withdraw");
  catalog("withdraw", {{"gfn", gfn}});
}

void GridClient::readmit(const Target& target) {
  if (target.is_ensemble()) fail(ErrorCode::QueryError, "readmit applies to configurations only");
  const std::string gfn = resolve(target);
  step("readmit.readmit");
  catalog("readmit", {{"gfn", gfn}});
}

std::vector<json> GridClient::audit(const AuditQuery& query) const {
  json args = json::object();
  if (query.principal) args["principal"] = *query.principal;
  if (query.operation) args["operation"] = *query.operation;
  if (query.target) args["target"] = *query.target;
  if (query.since) args["since"] = *query.since;
  if (query.until) args["until"] = *query.until;
  const json result = catalog("audit_query", std::move(args));
  return {result.at("records").begin(), result.at("records").end()};
}

}  // namespace ildg::client
