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

#include "ildg/client/explore.hpp"

#include <algorithm>
#include <map>

namespace ildg::client {

using nlohmann::json;

std::string level_name(ExploreNode::Level level) {
  switch (level) {
    case ExploreNode::Level::Root: return "root";
    case ExploreNode::Level::Institution: return "institution";
    case ExploreNode::Level::Project: return "project";
    case ExploreNode::Level::Series: return "series";
  }
  return "root";
}

ExploreNode build_explore_tree(const std::vector<FlatRecord>& records) {
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<std::int64_t>>>> groups;
  for (const auto& r : records) groups[r.institution][r.project_name][r.series].push_back(r.updates);

  ExploreNode root;
  for (const auto& [institution, projects] : groups) {
    ExploreNode inst;
    inst.level = ExploreNode::Level::Institution;
    inst.label = institution;
    for (const auto& [project, series_map] : projects) {
      ExploreNode proj;
      proj.level = ExploreNode::Level::Project;
      proj.label = project;
      for (const auto& [series, updates] : series_map) {
        const auto [lo, hi] = std::minmax_element(updates.begin(), updates.end());
        ExploreNode leaf;
        leaf.level = ExploreNode::Level::Series;
        leaf.label = series;
        leaf.count = static_cast<std::int64_t>(updates.size());
        leaf.min_update = *lo;
        leaf.max_update = *hi;
        proj.count += leaf.count;
        proj.children.push_back(std::move(leaf));
      }
      inst.count += proj.count;
      inst.children.push_back(std::move(proj));
    }
    root.count += inst.count;
    root.children.push_back(std::move(inst));
  }
  return root;
}

namespace {

void render(const ExploreNode& node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (node.level == ExploreNode::Level::Series) {
    out += "series " + node.label + " (" + std::to_string(node.count) + ") updates " +
           std::to_string(node.min_update);
    if (node.max_update != node.min_update) out += ".." + std::to_string(node.max_update);
  } else {
    out += node.label + " (" + std::to_string(node.count) + ")";
  }
  out += '\n';
  for (const auto& child : node.children) render(child, depth + 1, out);
}

}  // namespace

std::string render_explore_tree(const ExploreNode& root) {
  std::string out;
  for (const auto& child : root.children) render(child, 0, out);
  return out;
}

json explore_to_json(const ExploreNode& node) {
  json j{{"level", level_name(node.level)}, {"label", node.label}, {"count", node.count}};
  if (node.level == ExploreNode::Level::Series) {
    j["minUpdate"] = node.min_update;
    j["maxUpdate"] = node.max_update;
  }
  json children = json::array();
  for (const auto& c : node.children) children.push_back(explore_to_json(c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace ildg::client
