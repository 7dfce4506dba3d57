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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ildg::markup {

// Element-only XML subset: no attributes, no mixed content, no DOCTYPE,
// CDATA or processing instructions beyond a leading <?xml ...?> prolog.
struct Element {
  std::string name;
  std::string text;  // decoded character data; empty for containers
  std::vector<Element> children;
  std::size_t offset = 0;  // byte offset of the start tag
};

/// Throws GridError(PARSE_ERROR) on anything outside the subset.
Element parse(std::string_view text);

/// Escapes &, < and > for element content.
std::string escape(std::string_view text);

}  // namespace ildg::markup
