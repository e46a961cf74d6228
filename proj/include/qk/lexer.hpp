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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qk {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String,
  Operator,
  Newline,
  Indent,
  Dedent,
};

std::string_view token_kind_name(TokenKind kind) noexcept;

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;    // 1-based
  int column = 1;  // 1-based

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const { return is(TokenKind::Operator, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }

  friend bool operator==(const Token&, const Token&) = default;
};

bool is_keyword(std::string_view word) noexcept;

/// Lexes kernel source into a token stream with synthetic indent/dedent
/// tokens. Comments are stripped, blank lines skipped, and newlines inside
/// brackets (or after a trailing backslash) join physical lines. The first
/// logical line sets the base indentation, so a kernel body cut out of a
/// file lexes the same way as a top-level definition. Open blocks are closed
/// with dedents at end of input.
std::vector<Token> tokenize(std::string_view source);

}  // namespace qk
