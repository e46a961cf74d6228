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

#include "qk/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qk/error.hpp"
#include "qk/gates.hpp"

namespace qk {

Instruction adjoint_instruction(const Instruction& instr) {
  const GateInfo* info = find_gate(instr.name);
  if (!info) throw Error(ErrorCode::UnknownGate, "unknown gate '" + instr.name + "'");
  if (!info->unitary) {
    throw Error(ErrorCode::NonUnitarySubcircuit,
                "cannot take the adjoint of a circuit containing " + instr.name);
  }
  Instruction out = instr;
  switch (info->adjoint_rule) {
    case AdjointRule::SelfInverse:
      break;
    case AdjointRule::NegateParams:
      for (double& p : out.params) p = -p;
      break;
    case AdjointRule::SwapTo:
      out.name = std::string(info->adjoint_name);
      break;
  }
  return out;
}

namespace {

[[noreturn]] void dynamic_in_transform() {
  throw Error(ErrorCode::NonUnitarySubcircuit,
              "measurement-dependent control flow cannot be inverted or controlled");
}

std::vector<Node> adjoint_nodes(const std::vector<Node>& nodes) {
  std::vector<Node> out;
  out.reserve(nodes.size());
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (const auto* i = it->instruction()) {
      out.emplace_back(adjoint_instruction(*i));
    } else if (const auto* c = it->composite()) {
      out.emplace_back(adjoint(*c));
    } else {
      const ClassicalNode& cn = *it->classical();
      if (std::holds_alternative<CPrint>(cn)) continue;
      if (const auto* f = std::get_if<CFor>(&cn); f && f->count.kind == ClassicalExpr::Kind::Const) {
        out.emplace_back(ClassicalNode(CFor{f->count, adjoint_nodes(f->body)}));
        continue;
      }
      dynamic_in_transform();
    }
  }
  return out;
}

Instruction add_controls(const Instruction& instr, const std::vector<int>& controls) {
  const GateInfo* info = find_gate(instr.name);
  if (!info) throw Error(ErrorCode::UnknownGate, "unknown gate '" + instr.name + "'");
  if (!info->unitary) {
    throw Error(ErrorCode::NonUnitarySubcircuit, "cannot control " + instr.name);
  }
  for (int c : controls) {
    bool clash = std::find(instr.targets.begin(), instr.targets.end(), c) != instr.targets.end() ||
                 std::find(instr.controls.begin(), instr.controls.end(), c) != instr.controls.end();
    if (clash) {
      throw Error(ErrorCode::RuntimeError,
                  "control qubit q[" + std::to_string(c) + "] is also used by " + instr.name);
    }
  }
  Instruction out = instr;
  out.controls.insert(out.controls.end(), controls.begin(), controls.end());
  return canonicalize_controls(std::move(out));
}

std::vector<Node> control_nodes(const std::vector<Node>& nodes, const std::vector<int>& controls,
                                bool honor_regions);

Composite control_composite(const Composite& c, const std::vector<int>& controls,
                            bool honor_regions) {
  if (honor_regions && (c.region == Region::Compute || c.region == Region::Uncompute)) {
    // Still reject anything that has no controlled meaning.
    flatten(c);
    return c;
  }
  Composite out;
  out.name = c.name;
  out.region = c.region;
  out.children = control_nodes(c.children, controls, honor_regions);
  return out;
}

std::vector<Node> control_nodes(const std::vector<Node>& nodes, const std::vector<int>& controls,
                                bool honor_regions) {
  std::vector<Node> out;
  out.reserve(nodes.size());
  for (const Node& n : nodes) {
    if (const auto* i = n.instruction()) {
      out.emplace_back(add_controls(*i, controls));
    } else if (const auto* c = n.composite()) {
      out.emplace_back(control_composite(*c, controls, honor_regions));
    } else {
      const ClassicalNode& cn = *n.classical();
      if (std::holds_alternative<CPrint>(cn)) continue;
      if (const auto* f = std::get_if<CFor>(&cn); f && f->count.kind == ClassicalExpr::Kind::Const) {
        out.emplace_back(ClassicalNode(CFor{f->count, control_nodes(f->body, controls, honor_regions)}));
        continue;
      }
      dynamic_in_transform();
    }
  }
  return out;
}

}  // namespace

Composite adjoint(const Composite& c) {
  Composite out;
  out.name = c.name;
  out.region = c.region == Region::Compute     ? Region::Uncompute
               : c.region == Region::Uncompute ? Region::Compute
                                               : c.region;
  out.children = adjoint_nodes(c.children);
  return out;
}

Composite controlled(const Composite& c, const std::vector<int>& controls) {
  if (controls.empty()) return c;
  return control_composite(c, controls, true);
}

Composite controlled_naive(const Composite& c, const std::vector<int>& controls) {
  if (controls.empty()) return c;
  return control_composite(c, controls, false);
}

Composite expand_compute_action(const Composite& compute, const Composite& action) {
  for (const Instruction& i : flatten(compute)) {
    if (i.name == "Measure" || i.name == "Reset") {
      throw Error(ErrorCode::MeasureInComputeBlock, i.name + " is not allowed in a compute block");
    }
  }
  Composite u = compute;
  u.region = Region::Compute;
  Composite v = action;
  v.region = Region::Action;
  Composite udg = adjoint(u);
  Composite out;
  out.name = "compute_action";
  out.children.emplace_back(std::move(u));
  out.children.emplace_back(std::move(v));
  out.children.emplace_back(std::move(udg));
  return out;
}

namespace {

bool is_rotation(std::string_view name) {
  return name == "Rx" || name == "Ry" || name == "Rz" || name == "CRz" || name == "CPhase";
}

bool touches(const Instruction& a, const Instruction& b) {
  auto uses = [](const Instruction& i, int q) {
    return std::find(i.targets.begin(), i.targets.end(), q) != i.targets.end() ||
           std::find(i.controls.begin(), i.controls.end(), q) != i.controls.end();
  };
  for (int q : a.targets) if (uses(b, q)) return true;
  for (int q : a.controls) if (uses(b, q)) return true;
  return false;
}

bool same_wires(const Instruction& a, const Instruction& b) {
  if (a.targets != b.targets) return false;
  std::vector<int> ca = a.controls, cb = b.controls;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

bool is_zero_angle(double theta) {
  constexpr double period = 4 * std::numbers::pi;
  double r = std::fmod(theta, period);
  if (r < 0) r += period;
  return r < 1e-12 || period - r < 1e-12;
}

bool cancels(const Instruction& a, const Instruction& b) {
  const GateInfo* info = find_gate(a.name);
  if (!info || !info->unitary || info->num_params != 0) return false;
  if (a.classical_target || b.classical_target) return false;
  if (!same_wires(a, b) || a.is_adjoint != b.is_adjoint) return false;
  return adjoint_instruction(a).name == b.name;
}

bool single_pass(std::vector<Instruction>& instrs) {
  bool changed = false;
  std::vector<Instruction> out;
  out.reserve(instrs.size());
  for (Instruction& cur : instrs) {
    if (is_rotation(cur.name) && is_zero_angle(cur.params[0])) {
      changed = true;
      continue;
    }
    // Latest earlier instruction sharing a wire.
    std::size_t j = out.size();
    while (j > 0 && !touches(out[j - 1], cur)) --j;
    if (j > 0) {
      Instruction& prev = out[j - 1];
      if (cancels(prev, cur)) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(j - 1));
        changed = true;
        continue;
      }
      if (is_rotation(cur.name) && prev.name == cur.name && same_wires(prev, cur) &&
          prev.is_adjoint == cur.is_adjoint) {
        prev.params[0] += cur.params[0];
        if (is_zero_angle(prev.params[0])) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(j - 1));
        }
        changed = true;
        continue;
      }
    }
    out.push_back(std::move(cur));
  }
  instrs = std::move(out);
  return changed;
}

}  // namespace

std::vector<Instruction> peephole_optimize(const std::vector<Instruction>& instrs) {
  std::vector<Instruction> work = instrs;
  while (single_pass(work)) {
  }
  return work;
}

Composite peephole_optimize(const Composite& c) {
  Composite out;
  out.name = c.name;
  for (auto& i : peephole_optimize(flatten(c))) out.children.emplace_back(std::move(i));
  return out;
}

}  // namespace qk
