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
#include <optional>
#include <vector>

#include <json.hpp>

namespace ildg::store {

struct JournalOptions {
  bool sync = true;                  // fdatasync after every append
  std::size_t snapshot_every = 1000;  // records between snapshots
};

// Append-only mutation log with periodic snapshots, kept in one directory:
//
//   journal.log    repeated "<decimal length>\n<json>\n" records
//   snapshot.json  full state plus the sequence number it covers
//
// A torn final record (crash mid-append) is dropped during recovery.
class Journal {
 public:
  struct Recovered {
    std::optional<nlohmann::json> snapshot;
    std::vector<nlohmann::json> records;  // only those newer than the snapshot
  };

  Journal(std::filesystem::path dir, JournalOptions options = {});
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  /// Loads the snapshot and the surviving tail. Call once, before append().
  Recovered recover();

  /// Assigns the next sequence number to record["seq"] and persists it
  /// before returning.
  std::uint64_t append(nlohmann::json record);

  bool snapshot_due() const { return since_snapshot_ >= options_.snapshot_every; }

  /// Atomically replaces the snapshot with `state` and empties the log.
  void write_snapshot(nlohmann::json state);

  std::uint64_t last_seq() const { return seq_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void open_log();

  std::filesystem::path dir_;
  JournalOptions options_;
  int fd_ = -1;
  std::uint64_t seq_ = 0;
  std::size_t since_snapshot_ = 0;
};

}  // namespace ildg::store
