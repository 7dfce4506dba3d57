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

#include <memory>
#include <string>
#include <string_view>

#include "ildg/core/flatten.hpp"

namespace ildg::catalog {

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

struct Literal {
  enum class Kind { String, Number, Boolean };
  Kind kind = Kind::String;
  std::string text;  // string contents or decimal digits
  bool boolean = false;
};

struct Comparison {
  std::string column;
  ColumnType type = ColumnType::String;
  Comparator op = Comparator::Eq;
  Literal literal;
};

struct Expr {
  enum class Kind { Compare, And, Or, Not };
  Kind kind = Kind::Compare;
  Comparison comparison;  // Compare only
  std::shared_ptr<const Expr> lhs;  // And/Or/Not
  std::shared_ptr<const Expr> rhs;  // And/Or
};

// Boolean filter over FlatRecord columns:
//
//   expr    := term (OR term)*
//   term    := factor (AND factor)*
//   factor  := NOT factor | '(' expr ')' | column cmp literal
//   cmp     := = | != | < | <= | > | >=
//   literal := 'quoted string' | number | TRUE | FALSE
//
// Keywords are case-insensitive; '' inside a string is an escaped quote.
// String and date columns compare bytewise, numeric columns compare by exact
// decimal value, boolean columns accept only = and !=. An absent decimal
// (avePlaquette) satisfies only !=. Empty text matches every record.
class Predicate {
 public:
  /// Throws GridError(QUERY_ERROR) naming the 1-based failure position.
  static Predicate parse(std::string_view text);

  bool matches(const FlatRecord& record) const;
  bool match_all() const { return root_ == nullptr; }
  const Expr* root() const { return root_.get(); }

 private:
  std::shared_ptr<const Expr> root_;
};

std::string_view comparator_symbol(Comparator op);

}  // namespace ildg::catalog
