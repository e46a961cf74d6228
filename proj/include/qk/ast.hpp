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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qk/box.hpp"

namespace qk {

enum class BinaryOp { Add, Sub, Mul, Div, FloorDiv, Mod, Pow, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Plus, Not };

std::string_view binary_op_text(BinaryOp op) noexcept;

struct Expr;

struct IntLit {
  std::int64_t value = 0;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};
struct FloatLit {
  double value = 0.0;
  friend bool operator==(const FloatLit&, const FloatLit&) = default;
};
/// Imaginary literal such as `0.5j`.
struct ImagLit {
  double value = 0.0;
  friend bool operator==(const ImagLit&, const ImagLit&) = default;
};
struct StringLit {
  std::string value;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};
struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct NameRef {
  std::string name;
  friend bool operator==(const NameRef&, const NameRef&) = default;
};
struct Attribute {
  Box<Expr> base;
  std::string name;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};
struct Call {
  Box<Expr> callee;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&) = default;
};
/// `base[i]`, `base[a:b]`, `base[i, j]`.
struct Subscript {
  Box<Expr> base;
  std::vector<Expr> indices;
  friend bool operator==(const Subscript&, const Subscript&) = default;
};
/// Only valid as a subscript index.
struct Slice {
  std::optional<Box<Expr>> lower;
  std::optional<Box<Expr>> upper;
  friend bool operator==(const Slice&, const Slice&) = default;
};
struct Unary {
  UnaryOp op;
  Box<Expr> operand;
  friend bool operator==(const Unary&, const Unary&) = default;
};
struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};
struct ListLit {
  std::vector<Expr> items;
  friend bool operator==(const ListLit&, const ListLit&) = default;
};

struct Expr {
  using Node = std::variant<IntLit, FloatLit, ImagLit, StringLit, BoolLit, NameRef, Attribute,
                            Call, Subscript, Slice, Unary, Binary, ListLit>;
  Node node;
  int line = 0;
  int column = 0;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  // Source positions do not take part in structural equality.
  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

/// Name of a callee expression: `f` or `f.ctrl`; empty for anything else.
std::string callee_name(const Expr& callee);

// ---------------------------------------------------------------------------
// Types

enum class TypeKind {
  Qreg,
  Qubit,
  Int,
  Float,
  Bool,
  ListFloat,
  ListInt,
  ListPauli,
  Pauli,
  KernelSignature,
  IntRef,
  FloatRef,
  BoolRef,
  Matrix,
};

struct TypeAnnotation {
  TypeKind kind = TypeKind::Qreg;
  /// Parameter types of a KernelSignature; empty otherwise.
  std::vector<TypeKind> signature;

  bool is_ref() const {
    return kind == TypeKind::IntRef || kind == TypeKind::FloatRef || kind == TypeKind::BoolRef;
  }
  friend bool operator==(const TypeAnnotation&, const TypeAnnotation&) = default;
};

std::string type_to_string(const TypeAnnotation& type);
std::string_view type_kind_name(TypeKind kind) noexcept;

// ---------------------------------------------------------------------------
// Statements

enum class CallModifier { None, Adjoint, Ctrl };

struct Stmt;
using Block = std::vector<Stmt>;

struct GateCall {
  std::string name;  // canonical gate name
  CallModifier modifier = CallModifier::None;
  std::vector<Expr> ctrl_args;
  std::vector<Expr> args;
  /// Whole-register form such as `H(q)`.
  bool broadcast = false;
  friend bool operator==(const GateCall&, const GateCall&) = default;
};
struct KernelCall {
  std::string name;
  CallModifier modifier = CallModifier::None;
  std::vector<Expr> ctrl_args;
  std::vector<Expr> args;
  friend bool operator==(const KernelCall&, const KernelCall&) = default;
};
struct ClassicalCall {
  std::string name;
  std::vector<Expr> args;
  friend bool operator==(const ClassicalCall&, const ClassicalCall&) = default;
};
struct Assign {
  std::string target;
  /// Element assignment `m[i, j] = v` when non-empty.
  std::vector<Expr> indices;
  Expr value;
  friend bool operator==(const Assign&, const Assign&) = default;
};
struct For {
  std::string var;
  Expr iterable;
  Block body;
  friend bool operator==(const For&, const For&) = default;
};
struct IfBranch {
  Expr condition;
  Block body;
  friend bool operator==(const IfBranch&, const IfBranch&) = default;
};
struct If {
  std::vector<IfBranch> branches;  // `if` then each `elif`
  Block else_body;
  friend bool operator==(const If&, const If&) = default;
};
struct WithCompute {
  Block body;
  friend bool operator==(const WithCompute&, const WithCompute&) = default;
};
struct WithAction {
  Block body;
  friend bool operator==(const WithAction&, const WithAction&) = default;
};
struct WithDecompose {
  Expr qreg;
  std::optional<std::string> method;
  std::string matrix_var;
  Block body;
  friend bool operator==(const WithDecompose&, const WithDecompose&) = default;
};
struct Print {
  std::vector<Expr> args;
  friend bool operator==(const Print&, const Print&) = default;
};
struct Pass {
  friend bool operator==(const Pass&, const Pass&) = default;
};

struct Stmt {
  using Node = std::variant<GateCall, KernelCall, ClassicalCall, Assign, For, If, WithCompute,
                            WithAction, WithDecompose, Print, Pass>;
  Node node;
  int line = 0;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

struct Param {
  std::string name;
  TypeAnnotation type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct KernelAST {
  std::string name;
  std::vector<Param> params;
  Block body;
  friend bool operator==(const KernelAST&, const KernelAST&) = default;
};

/// Maximum statement nesting depth; the kernel body itself is depth 1.
int nesting_depth(const KernelAST& ast);

}  // namespace qk
