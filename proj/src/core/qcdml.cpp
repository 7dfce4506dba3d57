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

#include "ildg/core/qcdml.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "ildg/core/error.hpp"
#include "markup.hpp"

namespace ildg {

namespace {

using markup::Element;

std::string_view trim(std::string_view s) {
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

// Indexes the children of a container element against a fixed schema.
class Children {
 public:
  Children(const Element& parent, std::initializer_list<std::string_view> allowed)
      : parent_(parent) {
    const std::set<std::string_view> names(allowed);
    if (!parent.text.empty() && !trim(parent.text).empty()) {
      fail(ErrorCode::ParseError, "<" + parent.name + "> must contain elements, not text");
    }
    for (const Element& child : parent.children) {
      if (!names.contains(child.name)) {
        fail(ErrorCode::ParseError, "unknown element <" + child.name + "> in <" + parent.name + ">");
      }
      if (!by_name_.emplace(child.name, &child).second) {
        fail(ErrorCode::ParseError, "element <" + child.name + "> appears more than once");
      }
    }
  }

  const Element* find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
  }

  const Element& container(const std::string& name) const {
    const Element* el = find(name);
    if (!el) missing(name);
    return *el;
  }

  std::optional<std::string> optional_text(const std::string& name) const {
    const Element* el = find(name);
    if (!el) return std::nullopt;
    if (!el->children.empty()) fail(ErrorCode::ParseError, "<" + name + "> must not contain elements");
    return std::string(trim(el->text));
  }

  std::string text(const std::string& name) const {
    auto value = optional_text(name);
    if (!value) missing(name);
    return *value;
  }

  std::int64_t integer(const std::string& name) const { return to_integer(name, text(name)); }

  static std::int64_t to_integer(const std::string& name, std::string_view digits) {
    std::int64_t value = 0;
    if (digits.empty() || digits.front() < '0' || digits.front() > '9') {
      fail(ErrorCode::ParseError, "<" + name + "> must be a non-negative integer");
    }
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || end != digits.data() + digits.size()) {
      fail(ErrorCode::ParseError, "<" + name + "> must be a non-negative integer");
    }
    return value;
  }

 private:
  [[noreturn]] void missing(const std::string& name) const {
    fail(ErrorCode::ParseError, "missing required element <" + name + "> in <" + parent_.name + ">");
  }

  const Element& parent_;
  std::map<std::string, const Element*, std::less<>> by_name_;
};

Element parse_root(std::string_view text, std::string_view expected) {
  Element root = markup::parse(text);
  if (root.name != expected) {
    fail(ErrorCode::ParseError, "expected root element <" + std::string(expected) + ">, found <" + root.name + ">");
  }
  return root;
}

ConfigurationMetadata parse_config(std::string_view text, const IntegrityFill* fill) {
  const Element root = parse_root(text, "configuration");
  const Children c(root, {"ensembleId", "series", "update", "date", "avePlaquette", "crc32", "size"});
  ConfigurationMetadata config;
  config.ensemble_id = c.text("ensembleId");
  config.series = c.text("series");
  config.update = c.integer("update");
  config.date = c.text("date");
  config.ave_plaquette = c.optional_text("avePlaquette");
  if (fill && !c.find("crc32")) {
    config.crc32 = fill->crc32;
  } else {
    config.crc32 = c.text("crc32");
  }
  if (fill && !c.find("size")) {
    config.size = fill->size;
  } else {
    config.size = c.integer("size");
  }
  validate(config);
  return config;
}

void leaf(std::ostringstream& out, int indent, std::string_view name, std::string_view value) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '<' << name << '>'
      << markup::escape(value) << "</" << name << ">\n";
}

}  // namespace

std::string_view doc_kind_name(DocKind kind) {
  return kind == DocKind::Ensemble ? "ensemble" : "configuration";
}

std::optional<DocKind> parse_doc_kind(std::string_view name) {
  if (name == "ensemble") return DocKind::Ensemble;
  if (name == "configuration") return DocKind::Configuration;
  return std::nullopt;
}

EnsembleMetadata parse_ensemble_doc(std::string_view text) {
  const Element root = parse_root(text, "ensemble");
  const Children c(root, {"ensembleId", "projectName", "institution", "collaboration", "lattice", "action"});
  EnsembleMetadata ensemble;
  ensemble.ensemble_id = c.text("ensembleId");
  ensemble.project_name = c.text("projectName");
  ensemble.institution = c.text("institution");
  ensemble.collaboration = c.optional_text("collaboration");

  const Children lattice(c.container("lattice"), {"nx", "ny", "nz", "nt"});
  ensemble.lattice = {lattice.integer("nx"), lattice.integer("ny"), lattice.integer("nz"),
                      lattice.integer("nt")};

  const Children action(c.container("action"), {"name", "beta"});
  ensemble.action_name = action.text("name");
  ensemble.beta = action.text("beta");

  validate(ensemble);
  return ensemble;
}

ConfigurationMetadata parse_config_doc(std::string_view text) { return parse_config(text, nullptr); }

ConfigurationMetadata parse_config_doc(std::string_view text, const IntegrityFill& fill) {
  return parse_config(text, &fill);
}

std::optional<DocKind> sniff_doc_kind(std::string_view text) {
  try {
    return parse_doc_kind(markup::parse(text).name);
  } catch (const GridError&) {
    return std::nullopt;
  }
}

std::string serialize_doc(const EnsembleMetadata& e) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<ensemble>\n";
  leaf(out, 1, "ensembleId", e.ensemble_id);
  leaf(out, 1, "projectName", e.project_name);
  leaf(out, 1, "institution", e.institution);
  if (e.collaboration) leaf(out, 1, "collaboration", *e.collaboration);
  out << "  <lattice>\n";
  leaf(out, 2, "nx", std::to_string(e.lattice.nx));
  leaf(out, 2, "ny", std::to_string(e.lattice.ny));
  leaf(out, 2, "nz", std::to_string(e.lattice.nz));
  leaf(out, 2, "nt", std::to_string(e.lattice.nt));
  out << "  </lattice>\n  <action>\n";
  leaf(out, 2, "name", e.action_name);
  leaf(out, 2, "beta", e.beta);
  out << "  </action>\n</ensemble>\n";
  return out.str();
}

std::string serialize_doc(const ConfigurationMetadata& c) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<configuration>\n";
  leaf(out, 1, "ensembleId", c.ensemble_id);
  leaf(out, 1, "series", c.series);
  leaf(out, 1, "update", std::to_string(c.update));
  leaf(out, 1, "date", c.date);
  if (c.ave_plaquette) leaf(out, 1, "avePlaquette", *c.ave_plaquette);
  leaf(out, 1, "crc32", c.crc32);
  leaf(out, 1, "size", std::to_string(c.size));
  out << "</configuration>\n";
  return out.str();
}

}  // namespace ildg
