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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ildg/core/clock.hpp"

namespace ildg::storage {

enum class TransferState { Requested, Staging, Ready, Done, Failed, Expired };
enum class Direction { Get, Put, Copy };

std::string_view state_name(TransferState state);
std::optional<TransferState> parse_state(std::string_view name);
std::string_view direction_name(Direction direction);
std::optional<Direction> parse_direction(std::string_view name);

bool is_terminal(TransferState state);

/// REQUESTED->STAGING->READY->{DONE,EXPIRED}, plus any non-FAILED state -> FAILED.
bool is_legal_transition(TransferState from, TransferState to);

// Lifecycle of one transfer request. Get and put requests move forward lazily
// from the clock whenever they are observed; copy requests are driven by the
// worker performing the pull. Every edge goes through one checked path, so an
// illegal transition is a logic_error rather than a silent state change.
class TransferRequest {
 public:
  TransferRequest(std::string id, Direction direction, std::string surl, std::string token, TimePoint created,
                  std::chrono::milliseconds stage_delay, std::chrono::seconds pin_lifetime);

  /// Applies every clock-driven transition due at `now` (get and put only).
  void advance(TimePoint now);

  // Copy worker edges.
  void begin_staging();
  void make_ready(TimePoint now);

  void complete();
  void fail(std::string reason);

  /// Pushes the pin out by `extra` from its current expiry. EXPIRED when the
  /// pin already lapsed, QUERY_ERROR in any other non-READY state or for a
  /// non-positive extension.
  TimePoint extend_pin(TimePoint now, std::chrono::seconds extra);

  const std::string& id() const { return id_; }
  Direction direction() const { return direction_; }
  const std::string& surl() const { return surl_; }
  TransferState state() const { return state_; }
  /// Only while READY.
  std::optional<std::string> token() const;
  std::optional<TimePoint> pin_expires_at() const { return pin_expires_at_; }
  const std::optional<std::string>& failure_reason() const { return failure_reason_; }
  const std::vector<TransferState>& history() const { return history_; }

 private:
  void transition(TransferState to);

  std::string id_;
  Direction direction_;
  std::string surl_;
  std::string token_;
  TimePoint ready_at_;
  std::chrono::seconds pin_lifetime_;
  TransferState state_ = TransferState::Requested;
  std::optional<TimePoint> pin_expires_at_;
  std::optional<std::string> failure_reason_;
  std::vector<TransferState> history_{TransferState::Requested};
};

}  // namespace ildg::storage
