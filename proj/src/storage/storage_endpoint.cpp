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

#include "ildg/storage/storage_endpoint.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <random>

#include <httplib.h>

#include "ildg/core/crc32.hpp"
#include "ildg/core/error.hpp"
#include "ildg/proto/envelope.hpp"
#include "ildg/proto/service_descriptor.hpp"

namespace ildg::storage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string random_hex128() {
  static std::mutex mu;
  static std::random_device rd;
  std::lock_guard lock(mu);
  std::string out;
  for (int i = 0; i < 4; ++i) out += crc32_hex(rd());
  return out;
}

// Write side of a temp file; fsynced before it is renamed into place.
class TempWriter {
 public:
  explicit TempWriter(const fs::path& path) : fd_(::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644)) {}
  ~TempWriter() {
    if (fd_ >= 0) ::close(fd_);
  }
  TempWriter(const TempWriter&) = delete;
  TempWriter& operator=(const TempWriter&) = delete;

  bool ok() const { return fd_ >= 0; }

  bool write(const char* data, std::size_t n) {
    while (n > 0) {
      const auto w = ::write(fd_, data, n);
      if (w < 0) return false;
      data += w;
      n -= static_cast<std::size_t>(w);
    }
    return true;
  }

  bool finish() {
    const bool synced = ::fdatasync(fd_) == 0;
    const bool closed = ::close(fd_) == 0;
    fd_ = -1;
    return synced && closed;
  }

 private:
  int fd_;
};

void error_reply(httplib::Response& res, int status, ErrorCode code, const std::string& message) {
  res.status = status;
  res.set_content(proto::encode(proto::ResponseEnvelope::failure(code, message)).dump(), "application/json");
}

const char* kDataPattern = R"(/ildg/v1/data/([0-9a-f]+))";

}  // namespace

json to_json(const TransferSnapshot& s) {
  json j{{"requestId", s.request_id},
         {"direction", direction_name(s.direction)},
         {"surl", s.surl},
         {"state", state_name(s.state)}};
  if (s.transfer_token) j["transferToken"] = *s.transfer_token;
  if (s.transfer_url) j["transferURL"] = *s.transfer_url;
  if (s.pin_expires_at) j["pinExpiresAt"] = format_timestamp(*s.pin_expires_at);
  if (s.failure_reason) j["failureReason"] = *s.failure_reason;
  return j;
}

TransferSnapshot transfer_snapshot_from_json(const json& j) {
  TransferSnapshot s;
  j.at("requestId").get_to(s.request_id);
  j.at("surl").get_to(s.surl);
  auto direction = parse_direction(j.at("direction").get<std::string>());
  auto state = parse_state(j.at("state").get<std::string>());
  if (!direction || !state) fail(ErrorCode::ParseError, "malformed transfer status");
  s.direction = *direction;
  s.state = *state;
  if (j.contains("transferToken")) s.transfer_token = j["transferToken"].get<std::string>();
  if (j.contains("transferURL")) s.transfer_url = j["transferURL"].get<std::string>();
  if (j.contains("pinExpiresAt")) {
    s.pin_expires_at = parse_timestamp(j["pinExpiresAt"].get<std::string>());
    if (!s.pin_expires_at) fail(ErrorCode::ParseError, "malformed pinExpiresAt");
  }
  if (j.contains("failureReason")) s.failure_reason = j["failureReason"].get<std::string>();
  return s;
}

StorageEndpoint::StorageEndpoint(Options options)
    : config_(std::move(options.config)),
      clock_(options.clock ? options.clock : system_clock()),
      pull_options_(options.pull_options),
      temp_dir_(config_.root / kTempDirName),
      server_(std::move(options.tokens)) {
  if (config_.advertised_host.empty()) config_.advertised_host = config_.host;
  fs::create_directories(config_.root);
  fs::remove_all(temp_dir_);
  fs::create_directories(temp_dir_);
  bind_storage_endpoint(server_, *this);
  install_routes();
  port_ = server_.start(config_.host, config_.port);
  heartbeat_ = registry::start_heartbeat(options.announce, proto::ServiceType::StorageEndpoint, url());
}

StorageEndpoint::~StorageEndpoint() { stop(); }

std::string StorageEndpoint::url() const {
  return "http://" + config_.advertised_host + ":" + std::to_string(port_);
}

std::string StorageEndpoint::surl_for(const std::string& path) const {
  Surl s{config_.advertised_host, port_, path};
  while (!s.path.empty() && s.path.front() == '/') s.path.erase(0, 1);
  return s.str();
}

fs::path StorageEndpoint::local_path(const std::string& surl) const {
  auto parsed = Surl::parse(surl);
  if (!parsed) fail(ErrorCode::QueryError, "malformed SURL '" + surl + "'");
  if (parsed->host != config_.advertised_host || parsed->port != port_) {
    fail(ErrorCode::QueryError, "SURL " + surl + " does not belong to this endpoint");
  }
  const fs::path rel(parsed->path);
  if (rel.begin() != rel.end() && *rel.begin() == kTempDirName) {
    fail(ErrorCode::QueryError, "SURL path is reserved");
  }
  return config_.root / rel;
}

std::string StorageEndpoint::new_id() { return random_hex128(); }

StorageEndpoint::Slot& StorageEndpoint::find(const std::string& request_id) {
  auto it = requests_.find(request_id);
  if (it == requests_.end()) fail(ErrorCode::NotFound, "unknown request " + request_id);
  return it->second;
}

StorageEndpoint::Slot* StorageEndpoint::find_by_token(const std::string& token) {
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return nullptr;
  return &requests_.at(it->second);
}

bool StorageEndpoint::occupied(const fs::path& target) const {
  std::error_code ec;
  return reserved_.contains(target) || fs::exists(target, ec);
}

void StorageEndpoint::release(Slot& slot) {
  if (!is_terminal(slot.request.state())) return;
  if (slot.request.direction() != Direction::Get) {
    reserved_.erase(slot.target);
    if (slot.request.state() != TransferState::Done) {
      std::error_code ec;
      fs::remove(slot.temp, ec);
    }
  }
  for (auto it = tokens_.begin(); it != tokens_.end();) {
    it = it->second == slot.request.id() ? tokens_.erase(it) : std::next(it);
  }
}

PutTicket StorageEndpoint::request_put(const std::string& surl) {
  const fs::path target = local_path(surl);
  std::lock_guard lock(mu_);
  if (occupied(target)) fail(ErrorCode::DuplicateGfn, "path of " + surl + " is already occupied");
  const std::string id = new_id();
  const std::string token = random_hex128();
  Slot slot{TransferRequest(id, Direction::Put, surl, token, clock_->now(), std::chrono::milliseconds{0},
                            config_.pin_lifetime),
            target, temp_dir_ / id};
  slot.request.advance(clock_->now());
  requests_.emplace(id, std::move(slot));
  tokens_.emplace(token, id);
  reserved_.insert(target);
  return {id, token, url() + std::string(proto::kDataPathPrefix) + token};
}

void StorageEndpoint::commit_put(const std::string& request_id, const std::string& crc32) {
  if (!is_crc32_hex(crc32)) fail(ErrorCode::QueryError, "crc32 must be 8 lowercase hex digits");
  std::lock_guard lock(mu_);
  Slot& slot = find(request_id);
  auto& req = slot.request;
  if (req.direction() != Direction::Put) fail(ErrorCode::NotFound, "no put request " + request_id);
  req.advance(clock_->now());
  switch (req.state()) {
    case TransferState::Done: return;
    case TransferState::Expired:
      release(slot);
      fail(ErrorCode::Expired, "put request " + request_id + " expired before commit");
    case TransferState::Failed:
      fail(ErrorCode::TransferFailed, "put request " + request_id + " failed: " + req.failure_reason().value_or(""));
    default: break;
  }
  if (slot.uploading) fail(ErrorCode::TransferFailed, "upload for " + request_id + " still in progress");
  if (!slot.uploaded) {
    req.fail("committed without payload");
    release(slot);
    fail(ErrorCode::TransferFailed, "no payload was uploaded for " + request_id);
  }
  if (dead_) fail(ErrorCode::TransferFailed, "endpoint is shutting down");
  const std::string stored = crc32_of_file(slot.temp);
  if (stored != crc32) {
    req.fail("checksum mismatch: stored " + stored + ", expected " + crc32);
    release(slot);
    fail(ErrorCode::TransferFailed, "checksum mismatch for " + req.surl() + ": stored " + stored + ", expected " +
                                        crc32);
  }
  fs::create_directories(slot.target.parent_path());
  fs::rename(slot.temp, slot.target);
  req.complete();
  release(slot);
}

void StorageEndpoint::abort_put(const std::string& surl, const std::string& crc32) {
  if (!is_crc32_hex(crc32)) fail(ErrorCode::QueryError, "crc32 must be 8 lowercase hex digits");
  const fs::path target = local_path(surl);
  std::lock_guard lock(mu_);
  bool acted = false;
  for (auto& [id, slot] : requests_) {
    if (slot.request.direction() == Direction::Get || slot.target != target) continue;
    slot.request.advance(clock_->now());
    if (is_terminal(slot.request.state())) continue;
    slot.request.fail("aborted by client");
    release(slot);
    acted = true;
  }
  std::error_code ec;
  if (fs::is_regular_file(target, ec)) {
    const std::string stored = crc32_of_file(target);
    if (stored != crc32) {
      fail(ErrorCode::QueryError, "stored file at " + surl + " has checksum " + stored + ", not " + crc32);
    }
    fs::remove(target);
    for (auto& [id, slot] : requests_) {
      if (slot.request.direction() != Direction::Get && slot.target == target &&
          slot.request.state() == TransferState::Done) {
        slot.request.fail("aborted by client after commit");
      }
    }
    acted = true;
  }
  if (!acted) fail(ErrorCode::NotFound, "nothing stored or pending at " + surl);
}

std::string StorageEndpoint::request_get(const std::string& surl) {
  const fs::path target = local_path(surl);
  std::lock_guard lock(mu_);
  std::error_code ec;
  if (!fs::is_regular_file(target, ec)) fail(ErrorCode::NotFound, "no file at " + surl);
  const std::string id = new_id();
  const std::string token = random_hex128();
  requests_.emplace(id, Slot{TransferRequest(id, Direction::Get, surl, token, clock_->now(), config_.stage_delay,
                                             config_.pin_lifetime),
                             target, {}});
  tokens_.emplace(token, id);
  return id;
}

TransferSnapshot StorageEndpoint::status(const std::string& request_id) {
  std::lock_guard lock(mu_);
  Slot& slot = find(request_id);
  auto& req = slot.request;
  req.advance(clock_->now());
  release(slot);
  TransferSnapshot s{req.id(), req.direction(), req.surl(), req.state(), req.token(), {}, req.pin_expires_at(),
                     req.failure_reason()};
  if (s.transfer_token && req.direction() != Direction::Copy) {
    s.transfer_url = url() + std::string(proto::kDataPathPrefix) + *s.transfer_token;
  } else {
    s.transfer_token.reset();
  }
  return s;
}

TimePoint StorageEndpoint::extend_pin(const std::string& request_id, std::int64_t extra_seconds) {
  std::lock_guard lock(mu_);
  Slot& slot = find(request_id);
  try {
    return slot.request.extend_pin(clock_->now(), std::chrono::seconds{extra_seconds});
  } catch (...) {
    release(slot);
    throw;
  }
}

std::string StorageEndpoint::request_copy(const std::string& dest_surl, const std::string& source_url,
                                          const std::string& expected_crc32) {
  const fs::path target = local_path(dest_surl);
  if (!proto::is_absolute_url(source_url)) fail(ErrorCode::QueryError, "source must be an absolute URL");
  if (!is_crc32_hex(expected_crc32)) fail(ErrorCode::QueryError, "crc32 must be 8 lowercase hex digits");
  std::string id;
  {
    std::lock_guard lock(mu_);
    if (occupied(target)) fail(ErrorCode::DuplicateGfn, "path of " + dest_surl + " is already occupied");
    if (dead_) fail(ErrorCode::TransferFailed, "endpoint is shutting down");
    id = new_id();
    requests_.emplace(id, Slot{TransferRequest(id, Direction::Copy, dest_surl, random_hex128(), clock_->now(),
                                               std::chrono::milliseconds{0}, config_.pin_lifetime),
                               target, temp_dir_ / id});
    reserved_.insert(target);
  }
  std::lock_guard lock(workers_mu_);
  workers_.emplace_back(&StorageEndpoint::run_copy, this, id, source_url, expected_crc32);
  return id;
}

void StorageEndpoint::run_copy(std::string request_id, std::string source_url, std::string expected_crc32) {
  fs::path temp;
  {
    std::lock_guard lock(mu_);
    Slot& slot = find(request_id);
    slot.request.begin_staging();
    temp = slot.temp;
  }
  std::string error;
  Crc32 crc;
  {
    TempWriter out(temp);
    if (!out.ok()) {
      error = "cannot create temp file";
    } else {
      try {
        proto::get_stream(
            source_url,
            [&](const char* data, std::size_t n) {
              if (dead_) return false;
              crc.update(std::string_view(data, n));
              return out.write(data, n);
            },
            pull_options_);
        if (!out.finish()) error = "cannot flush temp file";
      } catch (const std::exception& e) {
        error = std::string("pull from source failed: ") + e.what();
      }
    }
  }
  std::lock_guard lock(mu_);
  if (dead_) return;
  Slot& slot = find(request_id);
  if (slot.request.state() != TransferState::Staging) {
    std::error_code ec;
    fs::remove(slot.temp, ec);
    return;
  }
  if (error.empty() && crc.hex() != expected_crc32) {
    error = "checksum mismatch: pulled " + crc.hex() + ", expected " + expected_crc32;
  }
  if (!error.empty()) {
    slot.request.fail(error);
    release(slot);
    return;
  }
  fs::create_directories(slot.target.parent_path());
  fs::rename(slot.temp, slot.target);
  slot.request.make_ready(clock_->now());
  slot.request.complete();
  release(slot);
}

void StorageEndpoint::set_fault_hooks(FaultHooks hooks) {
  std::lock_guard lock(mu_);
  hooks_ = std::move(hooks);
}

FaultHooks StorageEndpoint::hooks() const {
  std::lock_guard lock(mu_);
  return hooks_;
}

void StorageEndpoint::install_routes() {
  auto& http = server_.http();

  http.Put(kDataPattern, [this](const httplib::Request& req, httplib::Response& res,
                                const httplib::ContentReader& reader) {
    const std::string token = req.matches[1];
    fs::path temp;
    std::string id;
    {
      std::lock_guard lock(mu_);
      Slot* slot = find_by_token(token);
      if (!slot || slot->request.direction() != Direction::Put) {
        return error_reply(res, 404, ErrorCode::NotFound, "unknown transfer token");
      }
      slot->request.advance(clock_->now());
      if (slot->request.state() == TransferState::Expired) {
        release(*slot);
        return error_reply(res, 410, ErrorCode::Expired, "transfer token expired");
      }
      if (slot->request.state() != TransferState::Ready || slot->uploading || slot->uploaded) {
        return error_reply(res, 409, ErrorCode::NotFound, "transfer token already used");
      }
      slot->uploading = true;
      temp = slot->temp;
      id = slot->request.id();
    }
    const auto hook = hooks().on_upload_chunk;
    std::string error;
    {
      TempWriter out(temp);
      std::vector<char> chunk;
      const bool read = out.ok() && reader([&](const char* data, std::size_t n) {
        if (dead_) return false;
        chunk.assign(data, data + n);
        if (hook && !hook(chunk)) return false;
        return out.write(chunk.data(), chunk.size());
      });
      if (!read) error = "upload interrupted";
      else if (!out.finish()) error = "cannot flush payload";
    }
    std::lock_guard lock(mu_);
    Slot& slot = requests_.at(id);
    slot.uploading = false;
    if (error.empty() && slot.request.state() != TransferState::Ready) error = "request no longer accepts payload";
    if (!error.empty()) {
      if (!is_terminal(slot.request.state())) slot.request.fail(error);
      release(slot);
      std::error_code ec;
      fs::remove(temp, ec);
      return error_reply(res, 400, ErrorCode::TransferFailed, error);
    }
    slot.uploaded = true;
    res.set_content(proto::encode(proto::ResponseEnvelope::success(json::object())).dump(), "application/json");
  });

  http.Get(kDataPattern, [this](const httplib::Request& req, httplib::Response& res) {
    const std::string token = req.matches[1];
    fs::path path;
    std::string id;
    {
      std::lock_guard lock(mu_);
      Slot* slot = find_by_token(token);
      if (!slot || slot->request.direction() != Direction::Get) {
        return error_reply(res, 404, ErrorCode::NotFound, "unknown transfer token");
      }
      slot->request.advance(clock_->now());
      if (slot->request.state() == TransferState::Expired) {
        release(*slot);
        return error_reply(res, 410, ErrorCode::Expired, "transfer token expired");
      }
      if (slot->request.state() != TransferState::Ready || slot->downloading) {
        return error_reply(res, 409, ErrorCode::NotFound, "transfer token already used");
      }
      slot->downloading = true;
      path = slot->target;
      id = slot->request.id();
    }
    auto in = std::make_shared<std::ifstream>(path, std::ios::binary);
    std::error_code ec;
    const auto size = fs::file_size(path, ec);
    if (!*in || ec) {
      std::lock_guard lock(mu_);
      Slot& slot = requests_.at(id);
      if (slot.request.state() == TransferState::Ready) slot.request.fail("stored file vanished");
      release(slot);
      return error_reply(res, 404, ErrorCode::NotFound, "stored file vanished");
    }
    const auto hook = hooks().on_download_chunk;
    res.set_content_provider(
        static_cast<std::size_t>(size), "application/octet-stream",
        [this, in, hook, buf = std::vector<char>(1 << 16)](std::size_t offset, std::size_t length,
                                                             httplib::DataSink& sink) mutable {
          if (dead_) return false;
          in->seekg(static_cast<std::streamoff>(offset));
          in->read(buf.data(), static_cast<std::streamsize>(std::min(length, buf.size())));
          const auto got = static_cast<std::size_t>(in->gcount());
          if (got == 0) return false;
          std::span<char> chunk(buf.data(), got);
          if (hook && !hook(chunk)) return false;
          return sink.write(chunk.data(), chunk.size());
        },
        [this, id](bool success) {
          std::lock_guard lock(mu_);
          Slot& slot = requests_.at(id);
          slot.downloading = false;
          if (slot.request.state() != TransferState::Ready) return;
          if (success && !dead_) slot.request.complete();
          else slot.request.fail("download interrupted");
          release(slot);
        });
  });
}

void StorageEndpoint::crash() {
  dead_ = true;
  stop();
}

void StorageEndpoint::stop() {
  heartbeat_.reset();
  server_.stop();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void bind_storage_endpoint(proto::RpcServer& server, StorageEndpoint& endpoint) {
  using proto::arg_int;
  using proto::arg_string;
  using Ctx = proto::CallContext;
  server.handle("request_put", [&endpoint](const Ctx&, const json& args) {
    const PutTicket t = endpoint.request_put(arg_string(args, "surl"));
    return json{{"requestId", t.request_id}, {"transferToken", t.transfer_token}, {"uploadURL", t.upload_url}};
  });
  server.handle("commit_put", [&endpoint](const Ctx&, const json& args) {
    endpoint.commit_put(arg_string(args, "requestId"), arg_string(args, "crc32"));
    return json::object();
  });
  server.handle("abort_put", [&endpoint](const Ctx&, const json& args) {
    endpoint.abort_put(arg_string(args, "surl"), arg_string(args, "crc32"));
    return json::object();
  });
  server.handle("request_get", [&endpoint](const Ctx&, const json& args) {
    return json{{"requestId", endpoint.request_get(arg_string(args, "surl"))}};
  });
  server.handle("status", [&endpoint](const Ctx&, const json& args) {
    return to_json(endpoint.status(arg_string(args, "requestId")));
  });
  server.handle("extend_pin", [&endpoint](const Ctx&, const json& args) {
    const TimePoint t = endpoint.extend_pin(arg_string(args, "requestId"), arg_int(args, "extraSeconds"));
    return json{{"pinExpiresAt", format_timestamp(t)}};
  });
  server.handle("request_copy", [&endpoint](const Ctx&, const json& args) {
    return json{{"requestId", endpoint.request_copy(arg_string(args, "destSurl"), arg_string(args, "sourceTransferURL"),
                                                    arg_string(args, "expectedCrc32"))}};
  });
}

}  // namespace ildg::storage
