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

#include <string_view>

namespace ildg {

/// Matches ^-?[0-9]+(\.[0-9]+)?$.
bool is_decimal(std::string_view text);

/// Exact numeric three-way comparison of two decimal strings; both must
/// satisfy is_decimal. Returns <0, 0 or >0.
int compare_decimal(std::string_view a, std::string_view b);

}  // namespace ildg
