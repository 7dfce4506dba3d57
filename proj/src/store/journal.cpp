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

#include "ildg/store/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ildg::store {

namespace {

constexpr const char* kLogName = "journal.log";
constexpr const char* kSnapshotName = "snapshot.json";

[[noreturn]] void sys_fail(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("journal write");
    }
    off += static_cast<std::size_t>(n);
  }
}

void sync_dir(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Journal::Journal(std::filesystem::path dir, JournalOptions options)
    : dir_(std::move(dir)), options_(options) {
  std::filesystem::create_directories(dir_);
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::open_log() {
  fd_ = ::open((dir_ / kLogName).c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) sys_fail("open journal");
}

Journal::Recovered Journal::recover() {
  Recovered out;
  std::uint64_t snapshot_seq = 0;
  const auto snapshot_path = dir_ / kSnapshotName;
  if (std::filesystem::exists(snapshot_path)) {
    auto snapshot = nlohmann::json::parse(read_file(snapshot_path));
    snapshot_seq = snapshot.at("lastSeq").get<std::uint64_t>();
    out.snapshot = std::move(snapshot);
  }
  seq_ = snapshot_seq;

  const auto log_path = dir_ / kLogName;
  const std::string log = std::filesystem::exists(log_path) ? read_file(log_path) : std::string();
  std::size_t pos = 0;
  std::size_t good = 0;
  while (pos < log.size()) {
    const auto nl = log.find('\n', pos);
    if (nl == std::string::npos || nl == pos || nl - pos > 12) break;
    std::size_t length = 0;
    bool digits = true;
    for (std::size_t i = pos; i < nl; ++i) {
      if (log[i] < '0' || log[i] > '9') digits = false;
      else length = length * 10 + static_cast<std::size_t>(log[i] - '0');
    }
    if (!digits || nl + 1 + length + 1 > log.size() || log[nl + 1 + length] != '\n') break;
    auto record = nlohmann::json::parse(log.substr(nl + 1, length), nullptr, false);
    if (record.is_discarded() || !record.contains("seq")) break;
    const auto seq = record["seq"].get<std::uint64_t>();
    if (seq > seq_) {
      seq_ = seq;
      out.records.push_back(std::move(record));
    }
    pos = nl + 1 + length + 1;
    good = pos;
  }
  if (good < log.size()) std::filesystem::resize_file(log_path, good);

  since_snapshot_ = out.records.size();
  open_log();
  return out;
}

std::uint64_t Journal::append(nlohmann::json record) {
  if (fd_ < 0) open_log();
  record["seq"] = seq_ + 1;
  const std::string payload = record.dump();
  write_all(fd_, std::to_string(payload.size()) + "\n" + payload + "\n");
  if (options_.sync && ::fdatasync(fd_) != 0) sys_fail("journal sync");
  ++since_snapshot_;
  return ++seq_;
}

void Journal::write_snapshot(nlohmann::json state) {
  state["lastSeq"] = seq_;
  const auto tmp = dir_ / (std::string(kSnapshotName) + ".tmp");
  {
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) sys_fail("open snapshot");
    write_all(fd, state.dump());
    if (options_.sync) ::fsync(fd);
    ::close(fd);
  }
  std::filesystem::rename(tmp, dir_ / kSnapshotName);
  if (options_.sync) sync_dir(dir_);
  if (fd_ >= 0 && ::ftruncate(fd_, 0) != 0) sys_fail("truncate journal");
  if (options_.sync && fd_ >= 0) ::fdatasync(fd_);
  since_snapshot_ = 0;
}

}  // namespace ildg::store
