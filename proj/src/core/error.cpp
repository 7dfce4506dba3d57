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

#include "ildg/core/error.hpp"

namespace ildg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AuthFailed: return "AUTH_FAILED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::EnsembleNotFound: return "ENSEMBLE_NOT_FOUND";
    case ErrorCode::DuplicateEnsemble: return "DUPLICATE_ENSEMBLE";
    case ErrorCode::DuplicateGfn: return "DUPLICATE_GFN";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::NoReplica: return "NO_REPLICA";
    case ErrorCode::VersionConflict: return "VERSION_CONFLICT";
    case ErrorCode::NothingToRevert: return "NOTHING_TO_REVERT";
    case ErrorCode::Withdrawn: return "WITHDRAWN";
    case ErrorCode::TransferFailed: return "TRANSFER_FAILED";
    case ErrorCode::TemplateError: return "TEMPLATE_ERROR";
    case ErrorCode::QueryError: return "QUERY_ERROR";
    case ErrorCode::KeyMismatch: return "KEY_MISMATCH";
    case ErrorCode::Expired: return "EXPIRED";
  }
  return "UNKNOWN";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (ErrorCode code : kAllErrorCodes) {
    if (error_code_name(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace ildg
