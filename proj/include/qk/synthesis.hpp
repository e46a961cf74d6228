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

#include <optional>
#include <string_view>
#include <vector>

#include "qk/ir.hpp"

namespace qk {

enum class SynthesisMethod { Default, Zyz, Kak, TwoLevel };

/// "zyz", "kak", "two_level" (or "two-level"), "default"; nullopt otherwise.
std::optional<SynthesisMethod> parse_synthesis_method(std::string_view name);
std::string_view synthesis_method_name(SynthesisMethod m) noexcept;

/// u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct ZyzAngles {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
};

ZyzAngles zyz(const Matrix& u);
Matrix zyz_matrix(const ZyzAngles& a);
/// Rz(delta), Ry(gamma), Rz(beta) in time order, zero angles omitted.
std::vector<Instruction> zyz_circuit(const Matrix& u, int target);

/// Interaction coefficients of u ~ K1 exp(i(a XX + b YY + c ZZ)) K2, each in (-pi/4, pi/4].
struct KakCoefficients {
  double a = 0, b = 0, c = 0;
};

KakCoefficients kak_coefficients(const Matrix& u);
/// At most three CX plus single-qubit rotations; q0 is the more significant qubit.
std::vector<Instruction> kak(const Matrix& u, int q0, int q1);

/// Givens reduction into two-level rotations, each expanded into CX and
/// single-qubit rotations. qubits[0] is the most significant.
std::vector<Instruction> two_level(const Matrix& u, const std::vector<int>& qubits);

/// Multi-controlled single-qubit unitary using the recursive controlled-V
/// construction; exact up to global phase. Uses only Rz, Ry and CX.
std::vector<Instruction> controlled_unitary(const Matrix& u, const std::vector<int>& controls,
                                            int target);

/// Default: zyz for one qubit, kak for two, two_level otherwise. Throws
/// NonUnitaryInput (tolerance 1e-8) or DimensionMismatch.
Composite synthesize(const Matrix& m, const std::vector<int>& targets,
                     SynthesisMethod method = SynthesisMethod::Default);

/// Rewrites controlled forms without a direct gate (multi-control, controlled
/// two-qubit gates) and fSim into CX plus single-qubit rotations. Other gates pass through.
std::vector<Instruction> decompose_to_basic(const Instruction& instr);

std::size_t count_gate(const std::vector<Instruction>& instrs, std::string_view name);

}  // namespace qk
