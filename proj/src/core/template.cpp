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

#include "ildg/core/template.hpp"

#include <sstream>

#include "ildg/core/error.hpp"

namespace ildg {

namespace {

constexpr std::string_view kPlaceholder = "%s";

void check(const FilenameTemplate& tmpl) {
  const std::size_t placeholders = count_placeholders(tmpl.pattern);
  if (placeholders != tmpl.fields.size()) {
    fail(ErrorCode::TemplateError, "template has " + std::to_string(placeholders) +
                                       " placeholder(s) but " + std::to_string(tmpl.fields.size()) +
                                       " field(s) were listed");
  }
  for (const auto& field : tmpl.fields) {
    if (!find_column(field)) fail(ErrorCode::TemplateError, "unknown column '" + field + "' in field list");
  }
}

}  // namespace

std::size_t count_placeholders(std::string_view pattern) {
  std::size_t n = 0;
  for (auto pos = pattern.find(kPlaceholder); pos != std::string_view::npos;
       pos = pattern.find(kPlaceholder, pos + kPlaceholder.size())) {
    ++n;
  }
  return n;
}

FilenameTemplate FilenameTemplate::parse(std::string_view pattern, std::string_view field_list) {
  FilenameTemplate tmpl;
  tmpl.pattern = std::string(pattern);
  std::istringstream in{std::string(field_list)};
  for (std::string field; in >> field;) tmpl.fields.push_back(field);
  check(tmpl);
  return tmpl;
}

std::string expand_template(const FilenameTemplate& tmpl, const FlatRecord& record) {
  check(tmpl);
  std::string out;
  std::string_view rest = tmpl.pattern;
  for (const auto& field : tmpl.fields) {
    const auto pos = rest.find(kPlaceholder);
    out.append(rest.substr(0, pos));
    out += column_text(record, field);
    rest.remove_prefix(pos + kPlaceholder.size());
  }
  out.append(rest);
  return out;
}

}  // namespace ildg
