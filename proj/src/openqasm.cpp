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

#include <sstream>

#include "qk/error.hpp"
#include "qk/gates.hpp"
#include "qk/printer.hpp"
#include "qk/runtime.hpp"
#include "qk/synthesis.hpp"
#include "qk/transforms.hpp"

namespace qk {

namespace {

void emit(const Instruction& in, std::ostringstream& out, int depth) {
  if (depth > 16) {
    throw Error(ErrorCode::UnsupportedGateForExport, "cannot lower " + dump_instruction(in));
  }
  Instruction instr = in;
  if (instr.is_adjoint) {
    instr.is_adjoint = false;
    instr = adjoint_instruction(instr);
  }
  instr = canonicalize_controls(instr);
  const GateInfo* info = find_gate(instr.name);
  if (!info) throw Error(ErrorCode::UnknownGate, "unknown gate '" + instr.name + "'");

  auto q = [](int i) { return "q[" + std::to_string(i) + "]"; };
  if (instr.name == "X" && instr.controls.size() == 2) {
    out << "ccx " << q(instr.controls[0]) << "," << q(instr.controls[1]) << ","
        << q(instr.targets[0]) << ";\n";
    return;
  }
  if (!instr.controls.empty() || info->qasm_name.empty()) {
    auto parts = decompose_to_basic(instr);
    if (parts.size() == 1 && parts[0] == instr) {
      throw Error(ErrorCode::UnsupportedGateForExport, "no OpenQASM form for " + dump_instruction(instr));
    }
    for (const Instruction& p : parts) emit(p, out, depth + 1);
    return;
  }
  if (instr.name == "Measure") {
    out << "measure " << q(instr.targets[0]) << " -> c[" << instr.targets[0] << "];\n";
    return;
  }
  out << info->qasm_name;
  if (!instr.params.empty()) {
    out << "(";
    for (std::size_t i = 0; i < instr.params.size(); ++i) {
      if (i) out << ",";
      out << format_float(instr.params[i]);
    }
    out << ")";
  }
  out << " ";
  for (std::size_t i = 0; i < instr.targets.size(); ++i) {
    if (i) out << ",";
    out << q(instr.targets[i]);
  }
  out << ";\n";
}

}  // namespace

std::string to_openqasm(const std::vector<Instruction>& instrs, int num_qubits) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out << "qreg q[" << num_qubits << "];\ncreg c[" << num_qubits << "];\n";
  for (const Instruction& i : instrs) emit(i, out, 0);
  return out.str();
}

}  // namespace qk
