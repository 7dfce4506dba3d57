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

#include "ildg/catalog/predicate.hpp"

#include <cctype>
#include <vector>

#include "ildg/core/decimal.hpp"
#include "ildg/core/error.hpp"

namespace ildg::catalog {

namespace {

struct Token {
  enum class Kind { Ident, String, Number, Op, LParen, RParen, And, Or, Not, True, False, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t pos = 0;  // 1-based
};

[[noreturn]] void query_error(std::size_t pos, const std::string& what) {
  fail(ErrorCode::QueryError, "query error at position " + std::to_string(pos) + ": " + what);
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) != b[i]) return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) { return k < s.size() && s[k] >= '0' && s[k] <= '9'; };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t pos = i + 1;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (c == '(' || c == ')') {
      out.push_back({c == '(' ? Token::Kind::LParen : Token::Kind::RParen, std::string(1, c), pos});
      ++i;
    } else if (c == '\'') {
      std::string text;
      ++i;
      for (;;) {
        if (i >= s.size()) query_error(pos, "unterminated string literal");
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            text.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        text.push_back(s[i++]);
      }
      out.push_back({Token::Kind::String, std::move(text), pos});
    } else if (digit(i) || (c == '-' && digit(i + 1))) {
      std::size_t j = i + 1;
      while (digit(j)) ++j;
      if (j < s.size() && s[j] == '.') {
        if (!digit(j + 1)) query_error(j + 1, "malformed number");
        ++j;
        while (digit(j)) ++j;
      }
      if (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) {
        query_error(j + 1, "malformed number");
      }
      out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i)), pos});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      const std::string word(s.substr(i, j - i));
      Token::Kind kind = Token::Kind::Ident;
      if (iequals(word, "AND")) kind = Token::Kind::And;
      else if (iequals(word, "OR")) kind = Token::Kind::Or;
      else if (iequals(word, "NOT")) kind = Token::Kind::Not;
      else if (iequals(word, "TRUE")) kind = Token::Kind::True;
      else if (iequals(word, "FALSE")) kind = Token::Kind::False;
      out.push_back({kind, word, pos});
      i = j;
    } else if (c == '=' ) {
      out.push_back({Token::Kind::Op, "=", pos});
      ++i;
    } else if (c == '!' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Token::Kind::Op, "!=", pos});
      i += 2;
    } else if (c == '<' || c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Token::Kind::Op, std::string{c, '='}, pos});
        i += 2;
      } else {
        out.push_back({Token::Kind::Op, std::string(1, c), pos});
        ++i;
      }
    } else {
      query_error(pos, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", s.size() + 1});
  return out;
}

Comparator to_comparator(const std::string& op) {
  if (op == "=") return Comparator::Eq;
  if (op == "!=") return Comparator::Ne;
  if (op == "<") return Comparator::Lt;
  if (op == "<=") return Comparator::Le;
  if (op == ">") return Comparator::Gt;
  return Comparator::Ge;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::shared_ptr<const Expr> parse() {
    auto e = expr();
    if (peek().kind != Token::Kind::End) query_error(peek().pos, "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[i_]; }
  const Token& next() { return tokens_[i_++]; }

  static std::shared_ptr<const Expr> binary(Expr::Kind kind, std::shared_ptr<const Expr> l,
                                            std::shared_ptr<const Expr> r) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::shared_ptr<const Expr> expr() {
    auto e = term();
    while (peek().kind == Token::Kind::Or) {
      next();
      e = binary(Expr::Kind::Or, e, term());
    }
    return e;
  }

  std::shared_ptr<const Expr> term() {
    auto e = factor();
    while (peek().kind == Token::Kind::And) {
      next();
      e = binary(Expr::Kind::And, e, factor());
    }
    return e;
  }

  std::shared_ptr<const Expr> factor() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Not) {
      next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Not;
      e->lhs = factor();
      return e;
    }
    if (t.kind == Token::Kind::LParen) {
      next();
      auto e = expr();
      if (peek().kind != Token::Kind::RParen) query_error(peek().pos, "expected ')'");
      next();
      return e;
    }
    return comparison();
  }

  std::shared_ptr<const Expr> comparison() {
    const Token& col = next();
    if (col.kind != Token::Kind::Ident) {
      query_error(col.pos, col.kind == Token::Kind::End ? "unexpected end of predicate" : "expected column name");
    }
    const auto info = find_column(col.text);
    if (!info) query_error(col.pos, "unknown column '" + col.text + "'");

    const Token& op = next();
    if (op.kind != Token::Kind::Op) query_error(op.pos, "expected comparison operator");

    const Token& lit = next();
    Comparison c;
    c.column = col.text;
    c.type = info->type;
    c.op = to_comparator(op.text);
    switch (lit.kind) {
      case Token::Kind::String:
        c.literal = {Literal::Kind::String, lit.text, false};
        break;
      case Token::Kind::Number:
        c.literal = {Literal::Kind::Number, lit.text, false};
        break;
      case Token::Kind::True:
      case Token::Kind::False:
        c.literal = {Literal::Kind::Boolean, lit.text, lit.kind == Token::Kind::True};
        break;
      default:
        query_error(lit.pos, "expected literal");
    }

    const bool ok = [&] {
      switch (c.type) {
        case ColumnType::String: return c.literal.kind == Literal::Kind::String;
        case ColumnType::Integer:
        case ColumnType::Decimal: return c.literal.kind == Literal::Kind::Number;
        case ColumnType::Boolean: return c.literal.kind == Literal::Kind::Boolean;
      }
      return false;
    }();
    if (!ok) query_error(lit.pos, "literal type does not match column '" + c.column + "'");
    if (c.type == ColumnType::Boolean && c.op != Comparator::Eq && c.op != Comparator::Ne) {
      query_error(op.pos, "boolean column '" + c.column + "' supports only = and !=");
    }

    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Compare;
    e->comparison = std::move(c);
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

bool apply(Comparator op, int cmp) {
  switch (op) {
    case Comparator::Eq: return cmp == 0;
    case Comparator::Ne: return cmp != 0;
    case Comparator::Lt: return cmp < 0;
    case Comparator::Le: return cmp <= 0;
    case Comparator::Gt: return cmp > 0;
    case Comparator::Ge: return cmp >= 0;
  }
  return false;
}

bool evaluate(const Comparison& c, const FlatRecord& record) {
  const ColumnValue value = column_value(record, c.column);
  switch (c.type) {
    case ColumnType::String: {
      const int cmp = std::get<std::string>(value).compare(c.literal.text);
      return apply(c.op, cmp < 0 ? -1 : (cmp > 0 ? 1 : 0));
    }
    case ColumnType::Integer:
      return apply(c.op, compare_decimal(std::to_string(std::get<std::int64_t>(value)), c.literal.text));
    case ColumnType::Decimal: {
      const auto& text = std::get<DecimalValue>(value).text;
      if (text.empty()) return c.op == Comparator::Ne;
      return apply(c.op, compare_decimal(text, c.literal.text));
    }
    case ColumnType::Boolean:
      return apply(c.op, std::get<bool>(value) == c.literal.boolean ? 0 : 1);
  }
  return false;
}

bool evaluate(const Expr& e, const FlatRecord& record) {
  switch (e.kind) {
    case Expr::Kind::Compare: return evaluate(e.comparison, record);
    case Expr::Kind::And: return evaluate(*e.lhs, record) && evaluate(*e.rhs, record);
    case Expr::Kind::Or: return evaluate(*e.lhs, record) || evaluate(*e.rhs, record);
    case Expr::Kind::Not: return !evaluate(*e.lhs, record);
  }
  return false;
}

}  // namespace

Predicate Predicate::parse(std::string_view text) {
  Predicate p;
  auto tokens = tokenize(text);
  if (tokens.size() == 1) return p;  // blank: match all
  p.root_ = Parser(std::move(tokens)).parse();
  return p;
}

bool Predicate::matches(const FlatRecord& record) const { return !root_ || evaluate(*root_, record); }

std::string_view comparator_symbol(Comparator op) {
  switch (op) {
    case Comparator::Eq: return "=";
    case Comparator::Ne: return "!=";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
  }
  return "?";
}

}  // namespace ildg::catalog
