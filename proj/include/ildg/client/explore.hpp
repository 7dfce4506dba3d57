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
#include <string>
#include <vector>

#include <json.hpp>

#include "ildg/core/flatten.hpp"

namespace ildg::client {

// institution -> projectName -> series, each node counting the
// configurations beneath it. Siblings are in bytewise label order.
struct ExploreNode {
  enum class Level { Root, Institution, Project, Series };

  Level level = Level::Root;
  std::string label;
  std::int64_t count = 0;
  std::int64_t min_update = 0;  // series nodes only
  std::int64_t max_update = 0;
  std::vector<ExploreNode> children;

  bool operator==(const ExploreNode&) const = default;
};

std::string level_name(ExploreNode::Level level);

ExploreNode build_explore_tree(const std::vector<FlatRecord>& records);

/// Two-space indented text, one node per line; empty for an empty tree.
std::string render_explore_tree(const ExploreNode& root);

nlohmann::json explore_to_json(const ExploreNode& node);

}  // namespace ildg::client
