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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qk/ast.hpp"
#include "qk/linalg.hpp"

namespace qk {

struct Instruction {
  std::string name;
  /// Absolute qubit indices in the root register; q[0] is the most significant bit.
  std::vector<int> targets;
  std::vector<double> params;
  std::vector<int> controls;
  bool is_adjoint = false;
  /// Measure only.
  std::optional<int> classical_target;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

Instruction make_gate(std::string name, std::vector<int> targets, std::vector<double> params = {});

/// Gate-table arity check; throws ArityError or UnknownGate.
void validate_instruction(const Instruction& instr);

/// Single-control forms with a dedicated table entry: X->CX, Y->CY, Z->CZ, Rz->CRz.
Instruction canonicalize_controls(Instruction instr);

/// Matrix over controls followed by targets, first qubit most significant.
/// Throws NonUnitaryGate for Measure and Reset.
Matrix gate_matrix(const Instruction& instr);

/// Matrix of a table gate over its own targets only.
Matrix base_gate_matrix(std::string_view name, const std::vector<double>& params);

// ---------------------------------------------------------------------------
// Classical values and expressions over measurement slots.

using CValue = std::variant<bool, std::int64_t, double>;

std::string format_cvalue(const CValue& v);

struct ClassicalExpr {
  enum class Kind { Const, Slot, Binary, Unary };
  Kind kind = Kind::Const;
  CValue value = std::int64_t{0};
  int slot = -1;
  BinaryOp binary_op = BinaryOp::Add;
  UnaryOp unary_op = UnaryOp::Neg;
  std::vector<ClassicalExpr> operands;

  static ClassicalExpr constant(CValue v);
  static ClassicalExpr slot_ref(int slot);
  static ClassicalExpr binary(BinaryOp op, ClassicalExpr lhs, ClassicalExpr rhs);
  static ClassicalExpr unary(UnaryOp op, ClassicalExpr operand);

  friend bool operator==(const ClassicalExpr& a, const ClassicalExpr& b);
};

std::string to_string(const ClassicalExpr& e);

struct Node;

enum class Region { None, Compute, Action, Uncompute };

std::string_view region_name(Region r) noexcept;

struct Composite {
  std::string name;
  std::vector<Node> children;
  Region region = Region::None;

  friend bool operator==(const Composite& a, const Composite& b);
};

struct CIf {
  ClassicalExpr condition;
  std::vector<Node> then_children;
  std::vector<Node> else_children;
  friend bool operator==(const CIf& a, const CIf& b);
};

struct CFor {
  ClassicalExpr count;
  std::vector<Node> body;
  friend bool operator==(const CFor& a, const CFor& b);
};

struct CAssign {
  int slot = -1;
  std::string name;
  ClassicalExpr value;
  friend bool operator==(const CAssign&, const CAssign&) = default;
};

struct CPrint {
  /// Literal text or an expression over slots.
  std::vector<std::variant<std::string, ClassicalExpr>> args;
  friend bool operator==(const CPrint&, const CPrint&) = default;
};

using ClassicalNode = std::variant<CIf, CFor, CAssign, CPrint>;

struct Node {
  std::variant<Instruction, Composite, ClassicalNode> value;

  Node(Instruction i) : value(std::move(i)) {}
  Node(Composite c) : value(std::move(c)) {}
  Node(ClassicalNode c) : value(std::move(c)) {}

  const Instruction* instruction() const { return std::get_if<Instruction>(&value); }
  const Composite* composite() const { return std::get_if<Composite>(&value); }
  const ClassicalNode* classical() const { return std::get_if<ClassicalNode>(&value); }

  friend bool operator==(const Node& a, const Node& b);
};

/// Depth-first instruction list. CFor with a constant count is unrolled; CAssign
/// and CPrint carry no gates and are dropped. Throws DynamicControlFlowInCircuitMode
/// for CIf and for CFor with a measurement-dependent count.
std::vector<Instruction> flatten(const Composite& c);

std::size_t count_instructions(const Composite& c);

/// Highest qubit index referenced, or -1.
int max_qubit(const std::vector<Instruction>& instrs);

/// One line per instruction: `name(params) q[i] q[j] [ctrl: q[a]]`.
std::string dump_instruction(const Instruction& instr);
std::string dump(const std::vector<Instruction>& instrs);
/// Indented tree dump including composites and classical nodes.
std::string dump_tree(const Composite& c);

/// Register handle plus the results an execution leaves on it.
struct QReg {
  int size = 1;
  std::string name = "q";
  struct Results {
    std::map<std::string, std::int64_t> counts;
    std::map<std::string, double> expectations;
    std::map<std::string, CValue> byref;
    std::vector<Complex> amplitudes;
    std::vector<std::string> log;
  } results;
};

}  // namespace qk
