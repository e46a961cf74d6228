// Copyright 2026 The qk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qk/lexer.hpp"

#include <array>
#include <cctype>

#include "qk/error.hpp"

namespace qk {

namespace {

constexpr std::array<std::string_view, 19> kKeywords = {
    "def", "for", "in", "if", "elif", "else", "with", "as", "and", "or",
    "not", "True", "False", "pass", "return", "while", "import", "from", "None"};

constexpr std::array<std::string_view, 11> kTwoCharOps = {
    "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "->"};

constexpr std::string_view kOneCharOps = "()[]{},:.+-*/%<>=@^~|&;";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_indentation()) continue;
      }
      char c = src_[pos_];
      if (c == '\n') {
        end_physical_line();
        continue;
      }
      if (c == ' ' || c == '\r' || c == '\t') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {
        advance();
        advance_newline();
        continue;
      }
      if (ident_start(c)) {
        lex_identifier();
      } else if (digit(c) || (c == '.' && digit(peek(1)))) {
        lex_number();
      } else if (c == '"' || c == '\'') {
        lex_string();
      } else {
        lex_operator();
      }
    }
    if (line_has_tokens_) push(TokenKind::Newline, "", line_, col_);
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenKind::Dedent, "", line_ + 1, 1);
    }
    return std::move(tokens_);
  }

 private:
  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  void advance() {
    ++pos_;
    ++col_;
  }
  void advance_newline() {
    ++pos_;
    ++line_;
    col_ = 1;
  }
  void push(TokenKind kind, std::string text, int line, int col) {
    tokens_.push_back(Token{kind, std::move(text), line, col});
  }

  void end_physical_line() {
    if (depth_ == 0 && line_has_tokens_) {
      push(TokenKind::Newline, "", line_, col_);
      line_has_tokens_ = false;
    }
    advance_newline();
    if (depth_ == 0) at_line_start_ = true;
  }

  // Returns false when the line was blank (already consumed).
  bool handle_indentation() {
    int width = 0;
    std::size_t p = pos_;
    bool saw_tab = false;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\r')) {
      if (src_[p] == '\t') saw_tab = true;
      if (src_[p] == ' ') ++width;
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#') {
      // blank or comment-only line
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      if (pos_ < src_.size()) advance_newline();
      return false;
    }
    if (saw_tab) {
      throw SourceError(ErrorCode::TabSpaceMix, "tab character in indentation", line_, 1);
    }
    while (pos_ < p) advance();
    at_line_start_ = false;
    int column = width + 1;
    if (indents_.empty()) {
      indents_.push_back(width);
      return true;
    }
    if (width > indents_.back()) {
      indents_.push_back(width);
      push(TokenKind::Indent, "", line_, 1);
    } else if (width < indents_.back()) {
      while (!indents_.empty() && width < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::Dedent, "", line_, 1);
      }
      if (indents_.empty() || indents_.back() != width) {
        throw SourceError(ErrorCode::IndentationError,
                          "unindent does not match any outer indentation level", line_,
                          column);
      }
    }
    return true;
  }

  void lex_identifier() {
    int line = line_, col = col_;
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    std::string word(src_.substr(start, pos_ - start));
    TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
    push(kind, std::move(word), line, col);
    line_has_tokens_ = true;
  }

  void lex_number() {
    int line = line_, col = col_;
    std::size_t start = pos_;
    while (digit(peek())) advance();
    if (peek() == '.') {
      advance();
      while (digit(peek())) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save_pos = pos_;
      int save_col = col_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!digit(peek())) {
        pos_ = save_pos;
        col_ = save_col;
      } else {
        while (digit(peek())) advance();
      }
    }
    if (peek() == 'j' || peek() == 'J') advance();
    push(TokenKind::Number, std::string(src_.substr(start, pos_ - start)), line, col);
    line_has_tokens_ = true;
  }

  void lex_string() {
    int line = line_, col = col_;
    char quote = src_[pos_];
    bool triple = peek(1) == quote && peek(2) == quote;
    std::string value;
    if (triple) {
      advance();
      advance();
      advance();
    } else {
      advance();
    }
    for (;;) {
      if (pos_ >= src_.size()) {
        throw SourceError(ErrorCode::UnterminatedString, "unterminated string literal", line, col);
      }
      char c = src_[pos_];
      if (triple) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n') {
          throw SourceError(ErrorCode::UnterminatedString, "unterminated string literal", line,
                            col);
        }
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char e = src_[pos_ + 1];
        advance();
        advance();
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '\\': value += '\\'; break;
          case '\'': value += '\''; break;
          case '"': value += '"'; break;
          default:
            value += '\\';
            value += e;
        }
        continue;
      }
      if (c == '\n') {
        value += c;
        advance_newline();
        continue;
      }
      value += c;
      advance();
    }
    push(TokenKind::String, std::move(value), line, col);
    line_has_tokens_ = true;
  }

  void lex_operator() {
    int line = line_, col = col_;
    std::string_view rest = src_.substr(pos_);
    for (auto op : kTwoCharOps) {
      if (rest.substr(0, 2) == op) {
        advance();
        advance();
        push(TokenKind::Operator, std::string(op), line, col);
        line_has_tokens_ = true;
        return;
      }
    }
    char c = src_[pos_];
    if (kOneCharOps.find(c) == std::string_view::npos) {
      throw SourceError(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'",
                        line, col);
    }
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
    advance();
    push(TokenKind::Operator, std::string(1, c), line, col);
    line_has_tokens_ = true;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool line_has_tokens_ = false;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Newline: return "newline";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
  }
  return "?";
}

bool is_keyword(std::string_view word) noexcept {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace qk
