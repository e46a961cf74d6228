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

#include "qk/ir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qk/error.hpp"
#include "qk/gates.hpp"
#include "qk/printer.hpp"

namespace qk {

Instruction make_gate(std::string name, std::vector<int> targets, std::vector<double> params) {
  Instruction i;
  i.name = std::move(name);
  i.targets = std::move(targets);
  i.params = std::move(params);
  return i;
}

void validate_instruction(const Instruction& instr) {
  const GateInfo* info = find_gate(instr.name);
  if (!info) throw Error(ErrorCode::UnknownGate, "unknown gate '" + instr.name + "'");
  if (static_cast<int>(instr.targets.size()) != info->num_targets) {
    throw Error(ErrorCode::ArityError, instr.name + " takes " + std::to_string(info->num_targets) +
                                           " qubit(s), got " + std::to_string(instr.targets.size()));
  }
  if (static_cast<int>(instr.params.size()) != info->num_params) {
    throw Error(ErrorCode::ArityError, instr.name + " takes " + std::to_string(info->num_params) +
                                           " parameter(s), got " + std::to_string(instr.params.size()));
  }
  std::vector<int> all = instr.targets;
  all.insert(all.end(), instr.controls.begin(), instr.controls.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(ErrorCode::RuntimeError, instr.name + " uses the same qubit more than once");
  }
  for (int q : all) {
    if (q < 0) throw Error(ErrorCode::IndexOutOfRange, "negative qubit index");
  }
}

Instruction canonicalize_controls(Instruction instr) {
  if (instr.controls.size() != 1 || instr.is_adjoint) return instr;
  static const std::map<std::string, std::string, std::less<>> single = {
      {"X", "CX"}, {"Y", "CY"}, {"Z", "CZ"}, {"Rz", "CRz"}};
  auto it = single.find(instr.name);
  if (it == single.end()) return instr;
  instr.name = it->second;
  instr.targets.insert(instr.targets.begin(), instr.controls.front());
  instr.controls.clear();
  return instr;
}

Matrix base_gate_matrix(std::string_view name, const std::vector<double>& params) {
  using std::numbers::pi;
  const GateInfo* info = find_gate(name);
  if (!info) throw Error(ErrorCode::UnknownGate, "unknown gate '" + std::string(name) + "'");
  if (!info->unitary) {
    throw Error(ErrorCode::NonUnitaryGate, std::string(info->name) + " has no unitary matrix");
  }
  if (static_cast<int>(params.size()) != info->num_params) {
    throw Error(ErrorCode::ArityError, std::string(info->name) + " parameter count mismatch");
  }
  const Complex I(0, 1);
  const double r2 = 1.0 / std::sqrt(2.0);
  std::string_view n = info->name;
  Matrix m;
  if (n == "H") {
    m.resize(2, 2);
    m << r2, r2, r2, -r2;
  } else if (n == "X") {
    m.resize(2, 2);
    m << 0, 1, 1, 0;
  } else if (n == "Y") {
    m.resize(2, 2);
    m << 0, -I, I, 0;
  } else if (n == "Z") {
    m.resize(2, 2);
    m << 1, 0, 0, -1;
  } else if (n == "S" || n == "Sdg" || n == "T" || n == "Tdg") {
    double phi = (n[0] == 'S' ? pi / 2 : pi / 4) * (n.ends_with("dg") ? -1 : 1);
    m = Matrix::Identity(2, 2);
    m(1, 1) = std::polar(1.0, phi);
  } else if (n == "Rx" || n == "Ry" || n == "Rz") {
    double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
    m.resize(2, 2);
    if (n == "Rx") m << c, -I * s, -I * s, c;
    else if (n == "Ry") m << c, -s, s, c;
    else m << std::polar(1.0, -params[0] / 2), 0, 0, std::polar(1.0, params[0] / 2);
  } else if (n == "CX" || n == "CY" || n == "CZ" || n == "CRz" || n == "CPhase") {
    m = Matrix::Identity(4, 4);
    Matrix u;
    if (n == "CX") u = base_gate_matrix("X", {});
    else if (n == "CY") u = base_gate_matrix("Y", {});
    else if (n == "CZ") u = base_gate_matrix("Z", {});
    else if (n == "CRz") u = base_gate_matrix("Rz", params);
    else {
      u = Matrix::Identity(2, 2);
      u(1, 1) = std::polar(1.0, params[0]);
    }
    m.block(2, 2, 2, 2) = u;
  } else if (n == "Swap") {
    m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  } else if (n == "fSim") {
    double c = std::cos(params[0]), s = std::sin(params[0]);
    m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = m(2, 2) = c;
    m(1, 2) = m(2, 1) = -I * s;
    m(3, 3) = std::polar(1.0, -params[1]);
  } else {
    throw Error(ErrorCode::UnknownGate, "no matrix for gate '" + std::string(n) + "'");
  }
  return m;
}

Matrix gate_matrix(const Instruction& instr) {
  Matrix base = base_gate_matrix(instr.name, instr.params);
  if (instr.is_adjoint) base = base.adjoint().eval();
  if (instr.controls.empty()) return base;
  Eigen::Index dim = base.rows() << instr.controls.size();
  Matrix m = Matrix::Identity(dim, dim);
  m.block(dim - base.rows(), dim - base.rows(), base.rows(), base.cols()) = base;
  return m;
}

// ---------------------------------------------------------------------------

std::string format_cvalue(const CValue& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "True" : "False";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return format_float(std::get<double>(v));
}

ClassicalExpr ClassicalExpr::constant(CValue v) {
  ClassicalExpr e;
  e.kind = Kind::Const;
  e.value = v;
  return e;
}

ClassicalExpr ClassicalExpr::slot_ref(int slot) {
  ClassicalExpr e;
  e.kind = Kind::Slot;
  e.slot = slot;
  return e;
}

ClassicalExpr ClassicalExpr::binary(BinaryOp op, ClassicalExpr lhs, ClassicalExpr rhs) {
  ClassicalExpr e;
  e.kind = Kind::Binary;
  e.binary_op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

ClassicalExpr ClassicalExpr::unary(UnaryOp op, ClassicalExpr operand) {
  ClassicalExpr e;
  e.kind = Kind::Unary;
  e.unary_op = op;
  e.operands.push_back(std::move(operand));
  return e;
}

bool operator==(const ClassicalExpr& a, const ClassicalExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ClassicalExpr::Kind::Const: return a.value == b.value;
    case ClassicalExpr::Kind::Slot: return a.slot == b.slot;
    case ClassicalExpr::Kind::Binary: return a.binary_op == b.binary_op && a.operands == b.operands;
    case ClassicalExpr::Kind::Unary: return a.unary_op == b.unary_op && a.operands == b.operands;
  }
  return false;
}

std::string to_string(const ClassicalExpr& e) {
  switch (e.kind) {
    case ClassicalExpr::Kind::Const: return format_cvalue(e.value);
    case ClassicalExpr::Kind::Slot: return "c[" + std::to_string(e.slot) + "]";
    case ClassicalExpr::Kind::Binary:
      return "(" + to_string(e.operands[0]) + " " + std::string(binary_op_text(e.binary_op)) +
             " " + to_string(e.operands[1]) + ")";
    case ClassicalExpr::Kind::Unary: {
      std::string op = e.unary_op == UnaryOp::Not ? "not " : e.unary_op == UnaryOp::Neg ? "-" : "+";
      return op + to_string(e.operands[0]);
    }
  }
  return "?";
}

std::string_view region_name(Region r) noexcept {
  switch (r) {
    case Region::None: return "none";
    case Region::Compute: return "compute";
    case Region::Action: return "action";
    case Region::Uncompute: return "uncompute";
  }
  return "?";
}

bool operator==(const Composite& a, const Composite& b) {
  return a.name == b.name && a.region == b.region && a.children == b.children;
}
bool operator==(const CIf& a, const CIf& b) {
  return a.condition == b.condition && a.then_children == b.then_children &&
         a.else_children == b.else_children;
}
bool operator==(const CFor& a, const CFor& b) { return a.count == b.count && a.body == b.body; }
bool operator==(const Node& a, const Node& b) { return a.value == b.value; }

namespace {

void flatten_into(const std::vector<Node>& nodes, std::vector<Instruction>& out) {
  for (const Node& n : nodes) {
    if (const auto* i = n.instruction()) {
      out.push_back(*i);
    } else if (const auto* c = n.composite()) {
      flatten_into(c->children, out);
    } else {
      const ClassicalNode& cn = *n.classical();
      if (std::holds_alternative<CIf>(cn)) {
        throw Error(ErrorCode::DynamicControlFlowInCircuitMode,
                    "measurement-dependent branch cannot be flattened; run in ftqc mode");
      }
      if (const auto* f = std::get_if<CFor>(&cn)) {
        const auto* count = f->count.kind == ClassicalExpr::Kind::Const
                                ? std::get_if<std::int64_t>(&f->count.value)
                                : nullptr;
        if (!count) {
          throw Error(ErrorCode::DynamicControlFlowInCircuitMode,
                      "measurement-dependent loop cannot be flattened; run in ftqc mode");
        }
        for (std::int64_t k = 0; k < *count; ++k) flatten_into(f->body, out);
      }
    }
  }
}

}  // namespace

std::vector<Instruction> flatten(const Composite& c) {
  std::vector<Instruction> out;
  flatten_into(c.children, out);
  return out;
}

std::size_t count_instructions(const Composite& c) { return flatten(c).size(); }

int max_qubit(const std::vector<Instruction>& instrs) {
  int m = -1;
  for (const auto& i : instrs) {
    for (int q : i.targets) m = std::max(m, q);
    for (int q : i.controls) m = std::max(m, q);
  }
  return m;
}

std::string dump_instruction(const Instruction& instr) {
  std::string s = instr.name;
  if (!instr.params.empty()) {
    s += '(';
    for (std::size_t k = 0; k < instr.params.size(); ++k) {
      if (k) s += ", ";
      s += format_float(instr.params[k]);
    }
    s += ')';
  }
  for (int q : instr.targets) s += " q[" + std::to_string(q) + "]";
  if (!instr.controls.empty()) {
    s += " [ctrl:";
    for (int q : instr.controls) s += " q[" + std::to_string(q) + "]";
    s += "]";
  }
  if (instr.is_adjoint) s += " adj";
  if (instr.classical_target) s += " -> c[" + std::to_string(*instr.classical_target) + "]";
  return s;
}

std::string dump(const std::vector<Instruction>& instrs) {
  std::string out;
  for (const auto& i : instrs) out += dump_instruction(i) + "\n";
  return out;
}

namespace {

void dump_nodes(const std::vector<Node>& nodes, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const Node& n : nodes) {
    if (const auto* i = n.instruction()) {
      out += pad + dump_instruction(*i) + "\n";
    } else if (const auto* c = n.composite()) {
      out += pad + c->name;
      if (c->region != Region::None) out += " <" + std::string(region_name(c->region)) + ">";
      out += " {\n";
      dump_nodes(c->children, depth + 1, out);
      out += pad + "}\n";
    } else {
      std::visit(
          [&](const auto& cn) {
            using T = std::decay_t<decltype(cn)>;
            if constexpr (std::is_same_v<T, CIf>) {
              out += pad + "if " + to_string(cn.condition) + " {\n";
              dump_nodes(cn.then_children, depth + 1, out);
              if (!cn.else_children.empty()) {
                out += pad + "} else {\n";
                dump_nodes(cn.else_children, depth + 1, out);
              }
              out += pad + "}\n";
            } else if constexpr (std::is_same_v<T, CFor>) {
              out += pad + "repeat " + to_string(cn.count) + " {\n";
              dump_nodes(cn.body, depth + 1, out);
              out += pad + "}\n";
            } else if constexpr (std::is_same_v<T, CAssign>) {
              out += pad + cn.name + " = c[" + std::to_string(cn.slot) + "] = " +
                     to_string(cn.value) + "\n";
            } else {
              out += pad + "print";
              for (const auto& a : cn.args) {
                if (const auto* s = std::get_if<std::string>(&a)) out += " \"" + *s + "\"";
                else out += " " + to_string(std::get<ClassicalExpr>(a));
              }
              out += "\n";
            }
          },
          *n.classical());
    }
  }
}

}  // namespace

std::string dump_tree(const Composite& c) {
  std::string out;
  dump_nodes({Node(c)}, 0, out);
  return out;
}

}  // namespace qk
