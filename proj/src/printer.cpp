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

#include "qk/printer.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qk {

std::string_view binary_op_text(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::FloorDiv: return "//";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Pow: return "**";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

std::string callee_name(const Expr& callee) {
  if (const auto* n = callee.as<NameRef>()) return n->name;
  if (const auto* a = callee.as<Attribute>()) {
    if (const auto* base = a->base->as<NameRef>()) return base->name + "." + a->name;
  }
  return {};
}

std::string_view type_kind_name(TypeKind kind) noexcept {
  switch (kind) {
    case TypeKind::Qreg: return "qreg";
    case TypeKind::Qubit: return "qubit";
    case TypeKind::Int: return "int";
    case TypeKind::Float: return "float";
    case TypeKind::Bool: return "bool";
    case TypeKind::ListFloat: return "List[float]";
    case TypeKind::ListInt: return "List[int]";
    case TypeKind::ListPauli: return "List[PauliOperator]";
    case TypeKind::Pauli: return "PauliOperator";
    case TypeKind::KernelSignature: return "KernelSignature";
    case TypeKind::IntRef: return "IntRef";
    case TypeKind::FloatRef: return "FloatRef";
    case TypeKind::BoolRef: return "BoolRef";
    case TypeKind::Matrix: return "matrix";
  }
  return "?";
}

std::string type_to_string(const TypeAnnotation& type) {
  std::string out(type_kind_name(type.kind));
  if (type.kind == TypeKind::KernelSignature) {
    out += '(';
    for (std::size_t i = 0; i < type.signature.size(); ++i) {
      if (i) out += ", ";
      out += type_kind_name(type.signature[i]);
    }
    out += ')';
  }
  return out;
}

namespace {

int block_depth(const Block& block) {
  if (block.empty()) return 0;
  int deepest = 0;
  for (const Stmt& s : block) {
    int d = 0;
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, For> || std::is_same_v<T, WithCompute> ||
                        std::is_same_v<T, WithAction> || std::is_same_v<T, WithDecompose>) {
            d = block_depth(node.body);
          } else if constexpr (std::is_same_v<T, If>) {
            for (const auto& br : node.branches) d = std::max(d, block_depth(br.body));
            d = std::max(d, block_depth(node.else_body));
          }
        },
        s.node);
    deepest = std::max(deepest, d);
  }
  return deepest + 1;
}

}  // namespace

int nesting_depth(const KernelAST& ast) { return block_depth(ast.body); }

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

namespace {

// Binding strength; higher binds tighter.
int precedence(const Expr& e) {
  if (const auto* b = e.as<Binary>()) {
    switch (b->op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: return 4;
      case BinaryOp::Add:
      case BinaryOp::Sub: return 5;
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::FloorDiv:
      case BinaryOp::Mod: return 6;
      case BinaryOp::Pow: return 8;
    }
  }
  if (const auto* u = e.as<Unary>()) return u->op == UnaryOp::Not ? 3 : 7;
  return 9;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string wrap_if(const Expr& e, bool parens) {
  std::string s = print_expr(e);
  return parens ? "(" + s + ")" : s;
}

std::string join_exprs(const std::vector<Expr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(items[i]);
  }
  return out;
}

}  // namespace

std::string print_expr(const Expr& expr) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, FloatLit>) {
          return format_float(n.value);
        } else if constexpr (std::is_same_v<T, ImagLit>) {
          std::string s = format_float(n.value);
          if (s.ends_with(".0")) s.resize(s.size() - 2);
          return s + "j";
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return quote(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "True" : "False";
        } else if constexpr (std::is_same_v<T, NameRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Attribute>) {
          return wrap_if(*n.base, precedence(*n.base) < 9) + "." + n.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          return wrap_if(*n.callee, precedence(*n.callee) < 9) + "(" + join_exprs(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Subscript>) {
          return wrap_if(*n.base, precedence(*n.base) < 9) + "[" + join_exprs(n.indices) + "]";
        } else if constexpr (std::is_same_v<T, Slice>) {
          std::string s;
          if (n.lower) s += print_expr(**n.lower);
          s += ":";
          if (n.upper) s += print_expr(**n.upper);
          return s;
        } else if constexpr (std::is_same_v<T, Unary>) {
          int p = precedence(expr);
          if (n.op == UnaryOp::Not) return "not " + wrap_if(*n.operand, precedence(*n.operand) < p);
          // `--x` would lex as two operators anyway, but keep nested signs readable.
          bool nested_sign = n.operand->template as<Unary>() != nullptr;
          std::string sign = n.op == UnaryOp::Neg ? "-" : "+";
          return sign + wrap_if(*n.operand, nested_sign || precedence(*n.operand) < p);
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = precedence(expr);
          int pl = precedence(*n.lhs);
          int pr = precedence(*n.rhs);
          bool left_parens, right_parens;
          if (n.op == BinaryOp::Pow) {
            left_parens = pl <= p;
            right_parens = pr < 7;
          } else if (p == 4) {
            left_parens = pl <= p;
            right_parens = pr <= p;
          } else {
            left_parens = pl < p;
            right_parens = pr <= p;
          }
          return wrap_if(*n.lhs, left_parens) + " " + std::string(binary_op_text(n.op)) + " " +
                 wrap_if(*n.rhs, right_parens);
        } else if constexpr (std::is_same_v<T, ListLit>) {
          return "[" + join_exprs(n.items) + "]";
        }
      },
      expr.node);
}

namespace {

std::string modifier_suffix(CallModifier m) {
  switch (m) {
    case CallModifier::None: return "";
    case CallModifier::Adjoint: return ".adjoint";
    case CallModifier::Ctrl: return ".ctrl";
  }
  return "";
}

std::string call_args(const std::vector<Expr>& ctrl, const std::vector<Expr>& args) {
  std::vector<Expr> all = ctrl;
  all.insert(all.end(), args.begin(), args.end());
  return "(" + join_exprs(all) + ")";
}

class SourcePrinter {
 public:
  std::string out;

  void block(const Block& b, int depth) {
    for (const Stmt& s : b) stmt(s, depth);
  }

 private:
  void line(int depth, const std::string& text) {
    out.append(static_cast<std::size_t>(depth) * 4, ' ');
    out += text;
    out += '\n';
  }

  void stmt(const Stmt& s, int depth) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, GateCall> || std::is_same_v<T, KernelCall>) {
            line(depth, n.name + modifier_suffix(n.modifier) + call_args(n.ctrl_args, n.args));
          } else if constexpr (std::is_same_v<T, ClassicalCall>) {
            line(depth, n.name + "(" + join_exprs(n.args) + ")");
          } else if constexpr (std::is_same_v<T, Assign>) {
            std::string target = n.target;
            if (!n.indices.empty()) target += "[" + join_exprs(n.indices) + "]";
            line(depth, target + " = " + print_expr(n.value));
          } else if constexpr (std::is_same_v<T, For>) {
            line(depth, "for " + n.var + " in " + print_expr(n.iterable) + ":");
            suite(n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, If>) {
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
              line(depth, (i ? "elif " : "if ") + print_expr(n.branches[i].condition) + ":");
              suite(n.branches[i].body, depth + 1);
            }
            if (!n.else_body.empty()) {
              line(depth, "else:");
              suite(n.else_body, depth + 1);
            }
          } else if constexpr (std::is_same_v<T, WithCompute>) {
            line(depth, "with compute:");
            suite(n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, WithAction>) {
            line(depth, "with action:");
            suite(n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, WithDecompose>) {
            std::string head = "with decompose(" + print_expr(n.qreg);
            if (n.method) head += ", " + *n.method;
            line(depth, head + ") as " + n.matrix_var + ":");
            suite(n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, Print>) {
            line(depth, "print(" + join_exprs(n.args) + ")");
          } else if constexpr (std::is_same_v<T, Pass>) {
            line(depth, "pass");
          }
        },
        s.node);
  }

  // Blocks that require a body in the grammar.
  void suite(const Block& b, int depth) {
    if (b.empty()) {
      throw std::logic_error("cannot print an empty required block");
    }
    block(b, depth);
  }
};

}  // namespace

std::string print_kernel_source(const KernelAST& ast) {
  SourcePrinter p;
  p.out = "def " + ast.name + "(";
  for (std::size_t i = 0; i < ast.params.size(); ++i) {
    if (i) p.out += ", ";
    p.out += ast.params[i].name + ": " + type_to_string(ast.params[i].type);
  }
  p.out += "):\n";
  p.block(ast.body, 1);
  return p.out;
}

}  // namespace qk
