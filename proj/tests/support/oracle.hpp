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
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ildg/core/metadata.hpp"
#include "support/harness.hpp"

// Reference models used to check the implementation from the outside. They
// share no code with the library beyond the plain metadata structs.
namespace ildg::testing {

/// RFC 3986 unreserved characters kept, everything else %XX uppercase.
std::string reference_encode(const std::string& text);
std::string reference_gfn(const EnsembleMetadata& e, const ConfigurationMetadata& c);

enum class Kind { String, Integer, Decimal, Boolean };

// Column name -> text value; absent optionals are "".
using Row = std::map<std::string, std::string>;
Row reference_row(const EnsembleMetadata& e, const ConfigurationMetadata& c, bool withdrawn, std::int64_t version);
const std::map<std::string, Kind>& reference_columns();

struct Node {
  enum class Op { Compare, And, Or, Not } op = Op::Compare;
  std::string column;
  std::string cmp;      // = != < <= > >=
  std::string literal;  // raw value (unquoted)
  std::vector<std::shared_ptr<Node>> kids;
};

/// Random expression whose literals are mostly drawn from `rows`.
std::shared_ptr<Node> random_predicate(std::mt19937_64& rng, const std::vector<Row>& rows, int depth = 3);
/// Renders with randomized keyword case, spacing and redundant parentheses.
std::string render(const Node& node, std::mt19937_64& rng);
bool evaluate(const Node& node, const Row& row);

struct FixtureEntry {
  EnsembleMetadata ensemble;
  ConfigurationMetadata original;
  std::optional<ConfigurationMetadata> altered;  // stored as version 2 when set
  bool withdrawn = false;
  std::string gfn;
  const ConfigurationMetadata& latest() const { return altered ? *altered : original; }
  std::int64_t version() const { return altered ? 2 : 1; }
  Row row() const { return reference_row(ensemble, latest(), withdrawn, version()); }
};

struct Fixture {
  std::vector<EnsembleMetadata> ensembles;
  std::vector<FixtureEntry> entries;
  std::vector<Row> rows() const;
  /// GFNs the reference scan selects, sorted.
  std::vector<std::string> select(const Node* predicate, bool include_withdrawn) const;
};

/// `configs` records with distinct natural keys spread over `ensembles`
/// ensembles; some are altered once and some withdrawn.
Fixture make_fixture(DocGenerator& gen, std::size_t ensembles, std::size_t configs);

}  // namespace ildg::testing
