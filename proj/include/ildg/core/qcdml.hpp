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
#include <optional>
#include <string>
#include <string_view>

#include "ildg/core/metadata.hpp"

namespace ildg {

enum class DocKind { Ensemble, Configuration };

std::string_view doc_kind_name(DocKind kind);  // "ensemble" | "configuration"
std::optional<DocKind> parse_doc_kind(std::string_view name);

// QCDml-lite codec. Documents are element-only XML:
//
//   <ensemble> ensembleId projectName institution collaboration?
//              lattice(nx ny nz nt) action(name beta) </ensemble>
//   <configuration> ensembleId series update date avePlaquette?
//                   crc32 size </configuration>
//
// Unknown or repeated elements and attributes are rejected with PARSE_ERROR.
EnsembleMetadata parse_ensemble_doc(std::string_view text);
ConfigurationMetadata parse_config_doc(std::string_view text);

// Values used for <crc32>/<size> when a document leaves them out. Elements
// that are present are kept as written.
struct IntegrityFill {
  std::string crc32;
  std::int64_t size = 0;
};
ConfigurationMetadata parse_config_doc(std::string_view text, const IntegrityFill& fill);

/// Root element name of a document, without validating the rest.
std::optional<DocKind> sniff_doc_kind(std::string_view text);

/// Canonical form: fixed element order, two-space indentation, trailing newline.
std::string serialize_doc(const EnsembleMetadata& ensemble);
std::string serialize_doc(const ConfigurationMetadata& config);

}  // namespace ildg
