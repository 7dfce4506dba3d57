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

#include "markup.hpp"

#include <cstdint>

#include "ildg/core/error.hpp"

namespace ildg::markup {

namespace {

constexpr int kMaxDepth = 32;

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size()) return false;
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += n + 1;
  }
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  Element document() {
    if (!valid_utf8(s_)) error("document is not valid UTF-8");
    if (s_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    skip_space();
    if (s_.substr(pos_).starts_with("<?xml")) {
      const auto end = s_.find("?>", pos_);
      if (end == std::string_view::npos) error("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
    if (at_end() || s_[pos_] != '<') error("expected root element");
    Element root = element(0);
    skip_misc();
    if (!at_end()) error("unexpected content after root element");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_));
  }

  bool at_end() const { return pos_ >= s_.size(); }

  void skip_space() {
    while (!at_end() && is_space(s_[pos_])) ++pos_;
  }

  // Whitespace and comments.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (s_.substr(pos_).starts_with("<!--")) {
        const auto end = s_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) error("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      return;
    }
  }

  std::string name() {
    const std::size_t start = pos_;
    if (at_end() || !is_name_start(s_[pos_])) error("expected element name");
    while (!at_end() && is_name_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Element element(int depth) {
    if (depth > kMaxDepth) error("nesting too deep");
    Element el;
    el.offset = pos_;
    ++pos_;  // '<'
    if (!at_end() && (s_[pos_] == '!' || s_[pos_] == '?')) error("unsupported markup declaration");
    el.name = name();
    skip_space();
    if (at_end()) error("unterminated start tag");
    if (s_[pos_] == '/') {
      ++pos_;
      if (at_end() || s_[pos_] != '>') error("malformed empty-element tag");
      ++pos_;
      return el;
    }
    if (s_[pos_] != '>') error("attributes are not allowed on <" + el.name + ">");
    ++pos_;

    bool has_text = false;
    for (;;) {
      if (at_end()) error("unterminated element <" + el.name + ">");
      const char c = s_[pos_];
      if (c == '<') {
        auto rest = s_.substr(pos_);
        if (rest.starts_with("</")) {
          pos_ += 2;
          const std::string closing = name();
          if (closing != el.name) error("mismatched end tag </" + closing + "> for <" + el.name + ">");
          skip_space();
          if (at_end() || s_[pos_] != '>') error("malformed end tag");
          ++pos_;
          break;
        }
        if (rest.starts_with("<!--")) {
          const auto end = s_.find("-->", pos_ + 4);
          if (end == std::string_view::npos) error("unterminated comment");
          pos_ = end + 3;
          continue;
        }
        el.children.push_back(element(depth + 1));
        continue;
      }
      if (c == '&') {
        reference(el.text);
      } else {
        el.text.push_back(c);
        ++pos_;
      }
      if (!is_space(c)) has_text = true;
    }
    if (!el.children.empty()) {
      if (has_text) error("mixed text and elements in <" + el.name + ">");
      el.text.clear();
    }
    return el;
  }

  void reference(std::string& out) {
    const auto end = s_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) error("malformed entity reference");
    const std::string_view ref = s_.substr(pos_ + 1, end - pos_ - 1);
    if (ref == "lt") {
      out.push_back('<');
    } else if (ref == "gt") {
      out.push_back('>');
    } else if (ref == "amp") {
      out.push_back('&');
    } else if (ref == "quot") {
      out.push_back('"');
    } else if (ref == "apos") {
      out.push_back('\'');
    } else if (ref.starts_with('#')) {
      std::uint32_t cp = 0;
      const bool hex = ref.size() > 1 && ref[1] == 'x';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) error("malformed character reference");
      for (char d : digits) {
        int v = -1;
        if (d >= '0' && d <= '9') v = d - '0';
        else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
        else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
        if (v < 0) error("malformed character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) error("character reference out of range");
      }
      if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) error("invalid character reference");
      append_utf8(out, cp);
    } else {
      error("unknown entity &" + std::string(ref) + ";");
    }
    pos_ = end + 1;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse(std::string_view text) { return Reader(text).document(); }

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace ildg::markup
