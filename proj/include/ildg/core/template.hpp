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

#include <string>
#include <string_view>
#include <vector>

#include "ildg/core/flatten.hpp"

namespace ildg {

// A local path pattern whose i-th "%s" is replaced by the i-th listed
// FlatRecord column.
struct FilenameTemplate {
  std::string pattern;
  std::vector<std::string> fields;

  /// Splits a whitespace-separated field list. Throws TEMPLATE_ERROR when
  /// the placeholder count and field count differ or a column is unknown.
  static FilenameTemplate parse(std::string_view pattern, std::string_view field_list);
};

std::size_t count_placeholders(std::string_view pattern);

/// Throws GridError(TEMPLATE_ERROR) on arity mismatch or unknown column.
std::string expand_template(const FilenameTemplate& tmpl, const FlatRecord& record);

}  // namespace ildg
