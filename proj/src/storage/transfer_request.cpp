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

#include "ildg/storage/transfer_request.hpp"

#include <array>
#include <stdexcept>

#include "ildg/core/error.hpp"

namespace ildg::storage {

namespace {

constexpr std::array<std::string_view, 6> kStateNames{"REQUESTED", "STAGING", "READY", "DONE", "FAILED", "EXPIRED"};
constexpr std::array<std::string_view, 3> kDirectionNames{"get", "put", "copy"};

}  // namespace

std::string_view state_name(TransferState state) { return kStateNames[static_cast<std::size_t>(state)]; }

std::optional<TransferState> parse_state(std::string_view name) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == name) return static_cast<TransferState>(i);
  }
  return std::nullopt;
}

std::string_view direction_name(Direction direction) {
  return kDirectionNames[static_cast<std::size_t>(direction)];
}

std::optional<Direction> parse_direction(std::string_view name) {
  for (std::size_t i = 0; i < kDirectionNames.size(); ++i) {
    if (kDirectionNames[i] == name) return static_cast<Direction>(i);
  }
  return std::nullopt;
}

bool is_terminal(TransferState state) {
  return state == TransferState::Done || state == TransferState::Failed || state == TransferState::Expired;
}

bool is_legal_transition(TransferState from, TransferState to) {
  using S = TransferState;
  if (to == S::Failed) return from != S::Failed;
  switch (from) {
    case S::Requested: return to == S::Staging;
    case S::Staging: return to == S::Ready;
    case S::Ready: return to == S::Done || to == S::Expired;
    default: return false;
  }
}

TransferRequest::TransferRequest(std::string id, Direction direction, std::string surl, std::string token,
                                 TimePoint created, std::chrono::milliseconds stage_delay,
                                 std::chrono::seconds pin_lifetime)
    : id_(std::move(id)),
      direction_(direction),
      surl_(std::move(surl)),
      token_(std::move(token)),
      ready_at_(created + stage_delay),
      pin_lifetime_(pin_lifetime) {}

void TransferRequest::transition(TransferState to) {
  if (!is_legal_transition(state_, to)) {
    throw std::logic_error("illegal transfer transition " + std::string(state_name(state_)) + " -> " +
                           std::string(state_name(to)));
  }
  state_ = to;
  history_.push_back(to);
}

void TransferRequest::advance(TimePoint now) {
  if (direction_ == Direction::Copy) return;
  if (state_ == TransferState::Requested) transition(TransferState::Staging);
  if (state_ == TransferState::Staging && now >= ready_at_) {
    transition(TransferState::Ready);
    pin_expires_at_ = ready_at_ + pin_lifetime_;
  }
  if (state_ == TransferState::Ready && now >= *pin_expires_at_) transition(TransferState::Expired);
}

void TransferRequest::begin_staging() { transition(TransferState::Staging); }

void TransferRequest::make_ready(TimePoint now) {
  transition(TransferState::Ready);
  pin_expires_at_ = now + pin_lifetime_;
}

void TransferRequest::complete() { transition(TransferState::Done); }

void TransferRequest::fail(std::string reason) {
  transition(TransferState::Failed);
  failure_reason_ = std::move(reason);
}

TimePoint TransferRequest::extend_pin(TimePoint now, std::chrono::seconds extra) {
  advance(now);
  if (extra.count() <= 0) ildg::fail(ErrorCode::QueryError, "pin extension must be positive");
  if (state_ == TransferState::Expired) ildg::fail(ErrorCode::Expired, "pin of request " + id_ + " has lapsed");
  if (state_ != TransferState::Ready) {
    ildg::fail(ErrorCode::QueryError, "request " + id_ + " is " + std::string(state_name(state_)) + ", not READY");
  }
  *pin_expires_at_ += extra;
  return *pin_expires_at_;
}

std::optional<std::string> TransferRequest::token() const {
  if (state_ != TransferState::Ready) return std::nullopt;
  return token_;
}

}  // namespace ildg::storage
