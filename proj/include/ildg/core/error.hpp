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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ildg {

// Closed error vocabulary shared by every service and the client.
enum class ErrorCode {
  AuthFailed,
  ParseError,
  EnsembleNotFound,
  DuplicateEnsemble,
  DuplicateGfn,
  NotFound,
  NoReplica,
  VersionConflict,
  NothingToRevert,
  Withdrawn,
  TransferFailed,
  TemplateError,
  QueryError,
  KeyMismatch,
  Expired,
};

inline constexpr std::array kAllErrorCodes = {
    ErrorCode::AuthFailed,      ErrorCode::ParseError,     ErrorCode::EnsembleNotFound,
    ErrorCode::DuplicateEnsemble, ErrorCode::DuplicateGfn, ErrorCode::NotFound,
    ErrorCode::NoReplica,       ErrorCode::VersionConflict, ErrorCode::NothingToRevert,
    ErrorCode::Withdrawn,       ErrorCode::TransferFailed, ErrorCode::TemplateError,
    ErrorCode::QueryError,      ErrorCode::KeyMismatch,    ErrorCode::Expired,
};

/// Wire spelling, e.g. "AUTH_FAILED".
std::string_view error_code_name(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view name);

class GridError : public std::runtime_error {
 public:
  GridError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw GridError(code, message);
}

}  // namespace ildg
