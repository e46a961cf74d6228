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

#include "qk/parser.hpp"

#include <charconv>
#include <cstdlib>
#include <map>

#include "qk/error.hpp"

namespace qk {

CallClass classify_call(std::string_view name, const std::set<std::string>& kernels,
                        const std::set<std::string>& gates) {
  CallClass out;
  std::string_view base = name;
  CallModifier modifier = CallModifier::None;
  if (auto dot = name.rfind('.'); dot != std::string_view::npos) {
    std::string_view suffix = name.substr(dot + 1);
    if (suffix == "ctrl") {
      modifier = CallModifier::Ctrl;
      base = name.substr(0, dot);
    } else if (suffix == "adjoint") {
      modifier = CallModifier::Adjoint;
      base = name.substr(0, dot);
    }
  }
  std::string base_str(base);
  if (gates.contains(base_str)) {
    out.kind = CallKind::Intrinsic;
    out.modifier = modifier;
    out.base = canonical_gate_name(base_str).value_or(base_str);
    return out;
  }
  if (kernels.contains(base_str)) {
    out.kind = modifier == CallModifier::None ? CallKind::Kernel : CallKind::KernelModifier;
    out.modifier = modifier;
    out.base = base_str;
    return out;
  }
  out.kind = CallKind::Classical;
  out.base = std::string(name);
  return out;
}

namespace {

const std::map<std::string, BinaryOp, std::less<>> kCompareOps = {
    {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt},
    {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t start, const ParseContext& ctx)
      : toks_(tokens), pos_(start), ctx_(ctx) {}

  std::size_t position() const { return pos_; }

  KernelAST parse_def() {
    skip_newlines();
    while (peek().is_op("@")) skip_line();
    expect_keyword("def");
    KernelAST ast;
    ast.name = expect_ident("kernel name").text;
    expect_op("(");
    if (!peek().is_op(")")) {
      for (;;) {
        const Token& pname = expect_ident("parameter name");
        if (!peek().is_op(":")) {
          throw SourceError(ErrorCode::MissingAnnotation,
                            "parameter '" + pname.text + "' has no type annotation", pname.line,
                            pname.column);
        }
        next();
        Param p{pname.text, parse_type()};
        for (const auto& existing : ast.params) {
          if (existing.name == p.name) {
            throw SourceError(ErrorCode::SyntaxError, "duplicate parameter '" + p.name + "'",
                              pname.line, pname.column);
          }
        }
        ast.params.push_back(std::move(p));
        if (peek().is_op(",")) {
          next();
          if (peek().is_op(")")) break;
          continue;
        }
        break;
      }
    }
    const Token& close = expect_op(")");
    if (ast.params.empty() || ast.params.front().type.kind != TypeKind::Qreg) {
      throw SourceError(ErrorCode::FirstArgNotQreg,
                        "kernel '" + ast.name + "' must take a qreg as its first argument",
                        close.line, close.column);
    }
    if (peek().is_op("->")) {
      next();
      expect_ident("return type");
    }
    expect_op(":");

    params_ = ast.params;
    known_kernels_ = ctx_.kernels;
    known_kernels_.insert(ast.name);
    for (const auto& p : ast.params) {
      if (p.type.kind == TypeKind::KernelSignature) known_kernels_.insert(p.name);
    }

    if (peek().kind == TokenKind::Newline) {
      next();
      if (peek().kind == TokenKind::Indent) {
        next();
        ast.body = parse_statements_until_dedent();
      }
    } else {
      ast.body.push_back(parse_simple_statement());
      expect_newline();
    }
    return ast;
  }

 private:
  const Token& peek(std::size_t off = 0) const {
    static const Token eof{TokenKind::Newline, "<end of input>", 0, 0};
    if (pos_ + off >= toks_.size()) return eof;
    return toks_[pos_ + off];
  }
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    int line = at.line, col = at.column;
    if (line == 0 && !toks_.empty()) {
      line = toks_.back().line;
      col = toks_.back().column;
    }
    throw SourceError(ErrorCode::SyntaxError, msg, line, col);
  }

  std::string describe(const Token& t) const {
    switch (t.kind) {
      case TokenKind::Newline: return t.text.empty() ? "end of line" : t.text;
      case TokenKind::Indent: return "indent";
      case TokenKind::Dedent: return "dedent";
      default: return "'" + t.text + "'";
    }
  }

  const Token& expect_op(std::string_view op) {
    if (!peek().is_op(op)) fail("expected '" + std::string(op) + "' but found " + describe(peek()), peek());
    return next();
  }
  const Token& expect_keyword(std::string_view kw) {
    if (!peek().is_keyword(kw)) fail("expected '" + std::string(kw) + "' but found " + describe(peek()), peek());
    return next();
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) {
      fail("expected " + std::string(what) + " but found " + describe(peek()), peek());
    }
    return next();
  }
  void expect_newline() {
    if (at_end()) return;
    if (peek().kind != TokenKind::Newline) fail("expected end of line but found " + describe(peek()), peek());
    next();
  }
  void skip_newlines() {
    while (!at_end() && peek().kind == TokenKind::Newline) next();
  }
  void skip_line() {
    while (!at_end() && peek().kind != TokenKind::Newline) next();
    if (!at_end()) next();
  }

  // ---- types --------------------------------------------------------------

  TypeKind parse_type_name(const Token& t) {
    static const std::map<std::string, TypeKind, std::less<>> names = {
        {"qreg", TypeKind::Qreg},         {"qubit", TypeKind::Qubit},
        {"int", TypeKind::Int},           {"float", TypeKind::Float},
        {"bool", TypeKind::Bool},         {"PauliOperator", TypeKind::Pauli},
        {"Operator", TypeKind::Pauli},    {"IntRef", TypeKind::IntRef},
        {"FloatRef", TypeKind::FloatRef}, {"BoolRef", TypeKind::BoolRef},
        {"matrix", TypeKind::Matrix}};
    auto it = names.find(t.text);
    if (it == names.end()) fail("unknown type '" + t.text + "'", t);
    return it->second;
  }

  TypeAnnotation parse_type() {
    const Token& t = expect_ident("type");
    TypeAnnotation type;
    if (t.text == "List" || t.text == "list") {
      expect_op("[");
      const Token& inner = expect_ident("list element type");
      expect_op("]");
      TypeKind k = parse_type_name(inner);
      if (k == TypeKind::Float) type.kind = TypeKind::ListFloat;
      else if (k == TypeKind::Int) type.kind = TypeKind::ListInt;
      else if (k == TypeKind::Pauli) type.kind = TypeKind::ListPauli;
      else fail("unsupported list element type '" + inner.text + "'", inner);
      return type;
    }
    if (t.text == "KernelSignature") {
      type.kind = TypeKind::KernelSignature;
      expect_op("(");
      while (!peek().is_op(")")) {
        const Token& pt = expect_ident("parameter type");
        TypeKind k = parse_type_name(pt);
        if (k == TypeKind::KernelSignature) fail("nested KernelSignature is not supported", pt);
        type.signature.push_back(k);
        if (peek().is_op(",")) next();
        else break;
      }
      const Token& close = expect_op(")");
      if (type.signature.empty() || (type.signature.front() != TypeKind::Qreg &&
                                     type.signature.front() != TypeKind::Qubit)) {
        fail("KernelSignature must start with a qreg or qubit parameter", close);
      }
      return type;
    }
    type.kind = parse_type_name(t);
    return type;
  }

  // ---- statements ---------------------------------------------------------

  Block parse_statements_until_dedent() {
    Block block;
    for (;;) {
      if (at_end()) break;
      if (peek().kind == TokenKind::Dedent) {
        next();
        break;
      }
      if (peek().kind == TokenKind::Newline) {
        next();
        continue;
      }
      parse_statement_into(block);
    }
    return block;
  }

  Block parse_suite() {
    expect_op(":");
    if (peek().kind == TokenKind::Newline) {
      next();
      if (peek().kind != TokenKind::Indent) fail("expected an indented block", peek());
      next();
      return parse_statements_until_dedent();
    }
    Block b;
    b.push_back(parse_simple_statement());
    expect_newline();
    return b;
  }

  void parse_statement_into(Block& block) {
    const Token& t = peek();
    int line = t.line;
    if (t.is_keyword("for")) {
      next();
      For f;
      f.var = expect_ident("loop variable").text;
      expect_keyword("in");
      f.iterable = parse_expr();
      f.body = parse_suite();
      block.push_back(Stmt{std::move(f), line});
      return;
    }
    if (t.is_keyword("if")) {
      next();
      If s;
      IfBranch first{parse_expr(), {}};
      first.body = parse_suite();
      s.branches.push_back(std::move(first));
      while (peek().is_keyword("elif")) {
        next();
        IfBranch br{parse_expr(), {}};
        br.body = parse_suite();
        s.branches.push_back(std::move(br));
      }
      if (peek().is_keyword("else")) {
        next();
        s.else_body = parse_suite();
      }
      block.push_back(Stmt{std::move(s), line});
      return;
    }
    if (t.is_keyword("with")) {
      next();
      block.push_back(parse_with(line));
      return;
    }
    if (t.is_keyword("while") || t.is_keyword("return") || t.is_keyword("import") ||
        t.is_keyword("from") || t.is_keyword("def")) {
      fail("'" + t.text + "' is not supported inside a kernel", t);
    }
    block.push_back(parse_simple_statement());
    expect_newline();
  }

  Stmt parse_with(int line) {
    const Token& kind = expect_ident("compute, action or decompose");
    if (kind.text == "compute") {
      return Stmt{WithCompute{parse_suite()}, line};
    }
    if (kind.text == "action") {
      return Stmt{WithAction{parse_suite()}, line};
    }
    if (kind.text == "decompose") {
      WithDecompose d;
      expect_op("(");
      d.qreg = parse_expr();
      if (peek().is_op(",")) {
        next();
        const Token& m = peek();
        if (m.kind == TokenKind::Identifier || m.kind == TokenKind::String) {
          d.method = m.text;
          next();
        } else {
          fail("expected synthesis method name", m);
        }
      }
      expect_op(")");
      expect_keyword("as");
      d.matrix_var = expect_ident("matrix variable").text;
      d.body = parse_suite();
      return Stmt{std::move(d), line};
    }
    fail("unknown with-block '" + kind.text + "'", kind);
  }

  Stmt parse_simple_statement() {
    const Token& start = peek();
    int line = start.line;
    if (start.is_keyword("pass")) {
      next();
      return Stmt{Pass{}, line};
    }
    Expr e = parse_expr();
    const Token& t = peek();
    if (t.is_op("=") || t.is_op("+=") || t.is_op("-=") || t.is_op("*=") || t.is_op("/=")) {
      next();
      Assign a{"", {}, parse_expr()};
      if (const auto* n = e.as<NameRef>()) {
        a.target = n->name;
      } else if (const auto* s = e.as<Subscript>(); s && s->base->as<NameRef>()) {
        a.target = s->base->as<NameRef>()->name;
        a.indices = s->indices;
      } else {
        fail("invalid assignment target", start);
      }
      if (t.text != "=") {
        if (!a.indices.empty()) fail("augmented assignment to an element is not supported", t);
        BinaryOp op = t.text == "+=" ? BinaryOp::Add
                      : t.text == "-=" ? BinaryOp::Sub
                      : t.text == "*=" ? BinaryOp::Mul
                                       : BinaryOp::Div;
        Expr lhs{NameRef{a.target}, start.line, start.column};
        a.value = Expr{Binary{op, std::move(lhs), std::move(a.value)}, t.line, t.column};
      }
      return Stmt{std::move(a), line};
    }
    auto* call = std::get_if<Call>(&e.node);
    if (!call) fail("expected a call or an assignment", start);
    std::string name = callee_name(*call->callee);
    if (name.empty()) fail("unsupported call expression", start);
    if (name == "print") return Stmt{Print{std::move(call->args)}, line};

    CallClass cls = classify_call(name, known_kernels_);
    std::vector<Expr> ctrl;
    std::vector<Expr> args = std::move(call->args);
    if (cls.modifier == CallModifier::Ctrl) {
      if (args.empty()) fail("'" + name + "' needs a control argument", start);
      ctrl.push_back(std::move(args.front()));
      args.erase(args.begin());
    }
    switch (cls.kind) {
      case CallKind::Intrinsic: {
        GateCall g{cls.base, cls.modifier, std::move(ctrl), std::move(args), false};
        g.broadcast = is_broadcast(g);
        return Stmt{std::move(g), line};
      }
      case CallKind::Kernel:
      case CallKind::KernelModifier:
        return Stmt{KernelCall{cls.base, cls.modifier, std::move(ctrl), std::move(args)}, line};
      case CallKind::Classical:
        break;
    }
    return Stmt{ClassicalCall{cls.base, std::move(args)}, line};
  }

  bool is_broadcast(const GateCall& g) const {
    if (g.modifier == CallModifier::Ctrl || g.args.empty()) return false;
    const GateInfo* info = find_gate(g.name);
    if (!info || info->num_targets != 1) return false;
    const Expr& first = g.args.front();
    if (const auto* n = first.as<NameRef>()) {
      for (const auto& p : params_) {
        if (p.name == n->name) return p.type.kind == TypeKind::Qreg;
      }
      return false;
    }
    if (const auto* s = first.as<Subscript>()) {
      return s->indices.size() == 1 && s->indices.front().as<Slice>() != nullptr;
    }
    return false;
  }

  // ---- expressions --------------------------------------------------------

  Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, const Token& at) {
    return Expr{Binary{op, std::move(lhs), std::move(rhs)}, at.line, at.column};
  }

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (peek().is_keyword("or")) {
      const Token& t = next();
      lhs = make_binary(BinaryOp::Or, std::move(lhs), parse_and(), t);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (peek().is_keyword("and")) {
      const Token& t = next();
      lhs = make_binary(BinaryOp::And, std::move(lhs), parse_not(), t);
    }
    return lhs;
  }

  Expr parse_not() {
    if (peek().is_keyword("not")) {
      const Token& t = next();
      return Expr{Unary{UnaryOp::Not, parse_not()}, t.line, t.column};
    }
    return parse_comparison();
  }

  Expr parse_comparison() {
    Expr lhs = parse_arith();
    if (peek().kind == TokenKind::Operator) {
      auto it = kCompareOps.find(peek().text);
      if (it != kCompareOps.end()) {
        const Token& t = next();
        lhs = make_binary(it->second, std::move(lhs), parse_arith(), t);
        if (peek().kind == TokenKind::Operator && kCompareOps.contains(peek().text)) {
          fail("chained comparisons are not supported", peek());
        }
      }
    }
    return lhs;
  }

  Expr parse_arith() {
    Expr lhs = parse_term();
    while (peek().is_op("+") || peek().is_op("-")) {
      const Token& t = next();
      BinaryOp op = t.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, std::move(lhs), parse_term(), t);
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      const Token& t = peek();
      BinaryOp op;
      if (t.is_op("*")) op = BinaryOp::Mul;
      else if (t.is_op("/")) op = BinaryOp::Div;
      else if (t.is_op("//")) op = BinaryOp::FloorDiv;
      else if (t.is_op("%")) op = BinaryOp::Mod;
      else break;
      next();
      lhs = make_binary(op, std::move(lhs), parse_unary(), t);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().is_op("-") || peek().is_op("+")) {
      const Token& t = next();
      UnaryOp op = t.text == "-" ? UnaryOp::Neg : UnaryOp::Plus;
      return Expr{Unary{op, parse_unary()}, t.line, t.column};
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_postfix();
    if (peek().is_op("**")) {
      const Token& t = next();
      return make_binary(BinaryOp::Pow, std::move(base), parse_unary(), t);
    }
    return base;
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    for (;;) {
      const Token& t = peek();
      if (t.is_op(".")) {
        next();
        std::string attr = expect_ident("attribute name").text;
        e = Expr{Attribute{std::move(e), std::move(attr)}, t.line, t.column};
      } else if (t.is_op("(")) {
        next();
        Call c{std::move(e), {}};
        while (!peek().is_op(")")) {
          c.args.push_back(parse_expr());
          if (peek().is_op(",")) next();
          else break;
        }
        expect_op(")");
        e = Expr{std::move(c), t.line, t.column};
      } else if (t.is_op("[")) {
        next();
        Subscript s{std::move(e), {}};
        for (;;) {
          s.indices.push_back(parse_subscript_item());
          if (peek().is_op(",")) {
            next();
            if (peek().is_op("]")) break;
            continue;
          }
          break;
        }
        expect_op("]");
        e = Expr{std::move(s), t.line, t.column};
      } else {
        break;
      }
    }
    return e;
  }

  Expr parse_subscript_item() {
    const Token& t = peek();
    Slice slice;
    if (t.is_op(":")) {
      next();
      if (!peek().is_op("]") && !peek().is_op(",")) slice.upper = Box<Expr>(parse_expr());
      return Expr{std::move(slice), t.line, t.column};
    }
    Expr lower = parse_expr();
    if (!peek().is_op(":")) return lower;
    next();
    slice.lower = Box<Expr>(std::move(lower));
    if (!peek().is_op("]") && !peek().is_op(",")) slice.upper = Box<Expr>(parse_expr());
    return Expr{std::move(slice), t.line, t.column};
  }

  Expr parse_number(const Token& t) {
    const std::string& s = t.text;
    if (s.back() == 'j' || s.back() == 'J') {
      return Expr{ImagLit{std::strtod(s.c_str(), nullptr)}, t.line, t.column};
    }
    if (s.find_first_of(".eE") != std::string::npos) {
      return Expr{FloatLit{std::strtod(s.c_str(), nullptr)}, t.line, t.column};
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("invalid integer literal " + s, t);
    return Expr{IntLit{v}, t.line, t.column};
  }

  Expr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        next();
        return parse_number(t);
      case TokenKind::String:
        next();
        return Expr{StringLit{t.text}, t.line, t.column};
      case TokenKind::Identifier:
        next();
        return Expr{NameRef{t.text}, t.line, t.column};
      case TokenKind::Keyword:
        if (t.text == "True" || t.text == "False") {
          next();
          return Expr{BoolLit{t.text == "True"}, t.line, t.column};
        }
        break;
      case TokenKind::Operator:
        if (t.text == "(") {
          next();
          Expr inner = parse_expr();
          expect_op(")");
          return inner;
        }
        if (t.text == "[") {
          next();
          ListLit list;
          while (!peek().is_op("]")) {
            list.items.push_back(parse_expr());
            if (peek().is_op(",")) next();
            else break;
          }
          expect_op("]");
          return Expr{std::move(list), t.line, t.column};
        }
        break;
      default:
        break;
    }
    fail("unexpected " + describe(t), t);
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  const ParseContext& ctx_;
  std::vector<Param> params_;
  std::set<std::string> known_kernels_;
};

}  // namespace

KernelAST parse_kernel(const std::vector<Token>& tokens, const ParseContext& ctx) {
  Parser parser(tokens, 0, ctx);
  KernelAST ast = parser.parse_def();
  for (std::size_t i = parser.position(); i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Newline && tokens[i].kind != TokenKind::Dedent) {
      throw SourceError(ErrorCode::SyntaxError, "unexpected tokens after kernel definition",
                        tokens[i].line, tokens[i].column);
    }
  }
  return ast;
}

KernelAST parse_kernel_source(std::string_view source, const ParseContext& ctx) {
  return parse_kernel(tokenize(source), ctx);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view source) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= source.size();) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    lines.push_back(source.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

/// Lines holding a token at column 1, i.e. the starts of top-level items.
std::vector<int> top_level_lines(const std::vector<Token>& tokens) {
  std::vector<int> top_lines;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    bool line_start = k == 0 || tokens[k - 1].kind == TokenKind::Newline ||
                      tokens[k - 1].kind == TokenKind::Dedent;
    if (line_start && t.kind != TokenKind::Newline && t.kind != TokenKind::Dedent &&
        t.kind != TokenKind::Indent && t.column == 1) {
      top_lines.push_back(t.line);
    }
  }
  return top_lines;
}

/// A kernel's source runs until the line before the next top-level item,
/// without trailing blank lines.
std::string slice_from(const std::vector<std::string_view>& lines, const std::vector<int>& top_lines,
                       int first) {
  int last = static_cast<int>(lines.size());
  for (int l : top_lines) {
    if (l > first) {
      last = l - 1;
      break;
    }
  }
  while (last > first && lines[last - 1].find_first_not_of(" \t\r") == std::string_view::npos) {
    --last;
  }
  std::string text;
  for (int l = first; l <= last; ++l) {
    text += lines[l - 1];
    text += '\n';
  }
  return text;
}

}  // namespace

std::vector<ParsedKernel> parse_file(std::string_view source, const ParseContext& ctx) {
  std::vector<Token> tokens = tokenize(source);
  ParseContext file_ctx = ctx;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].is_keyword("def") && tokens[i + 1].kind == TokenKind::Identifier) {
      file_ctx.kernels.insert(tokens[i + 1].text);
    }
  }

  std::vector<ParsedKernel> out;
  std::vector<int> first_lines;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Newline) {
      ++i;
      continue;
    }
    if (t.is_op("@") || t.is_keyword("import") || t.is_keyword("from")) {
      while (i < tokens.size() && tokens[i].kind != TokenKind::Newline) ++i;
      continue;
    }
    if (!t.is_keyword("def")) {
      throw SourceError(ErrorCode::SyntaxError, "expected a kernel definition", t.line, t.column);
    }
    Parser parser(tokens, i, file_ctx);
    KernelAST ast = parser.parse_def();
    first_lines.push_back(t.line);
    i = parser.position();
    out.push_back(ParsedKernel{std::move(ast), {}});
  }
  auto lines = split_lines(source);
  auto top_lines = top_level_lines(tokens);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].source = slice_from(lines, top_lines, first_lines[k]);
  }
  return out;
}

std::vector<KernelSlice> split_kernels(std::string_view source) {
  std::vector<Token> tokens = tokenize(source);
  auto lines = split_lines(source);
  auto top_lines = top_level_lines(tokens);
  std::vector<KernelSlice> out;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& t = tokens[i];
    bool line_start = i == 0 || tokens[i - 1].kind == TokenKind::Newline ||
                      tokens[i - 1].kind == TokenKind::Dedent;
    if (!line_start || t.column != 1 || !t.is_keyword("def")) continue;
    if (tokens[i + 1].kind != TokenKind::Identifier) {
      throw SourceError(ErrorCode::SyntaxError, "expected a kernel name", tokens[i + 1].line,
                        tokens[i + 1].column);
    }
    KernelSlice slice;
    slice.name = tokens[i + 1].text;
    slice.line = t.line;
    slice.source = slice_from(lines, top_lines, t.line);
    for (const Token& u : tokenize(slice.source)) {
      if (u.kind == TokenKind::Identifier) slice.identifiers.insert(u.text);
    }
    out.push_back(std::move(slice));
  }
  return out;
}

}  // namespace qk
