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
#include <string_view>
#include <vector>

#include "qk/args.hpp"
#include "qk/compiler.hpp"
#include "qk/ir.hpp"
#include "qk/pauli.hpp"

namespace qk {

enum class ExecMode { Circuit, Ftqc };

std::optional<ExecMode> parse_exec_mode(std::string_view name);
std::string_view exec_mode_name(ExecMode m) noexcept;

struct BackendInfo {
  std::string_view name;
  bool shots;
  bool exact_expectation;
  bool mid_circuit_measure;
};

/// Bundled backends: "qpp-like" (default) and "ftqc". Throws BackendNotFound.
const BackendInfo& find_backend(std::string_view name);
std::vector<std::string> backend_names();

/// `key: value` lines; blank lines and `#` comments are skipped.
/// Throws IoError on a line without a colon.
std::map<std::string, std::string> parse_backend_config(std::string_view text);

struct ExecOptions {
  std::string backend = "qpp-like";
  ExecMode mode = ExecMode::Circuit;
  /// 0 keeps exact amplitudes (circuit mode) or the state after one run (ftqc).
  std::int64_t shots = 1024;
  std::uint64_t seed = 0;
  /// Peephole-optimize the traced circuit before running it.
  bool optimize = false;
  std::map<std::string, std::string> config;
};

/// Runs a kernel. Circuit mode traces once and simulates the flattened
/// circuit; ftqc mode interprets the program per shot with immediate
/// measurement feedback. Counts keys cover the whole register, q[0] leftmost,
/// with unmeasured qubits shown as 0. By-reference arguments are written back
/// on success only.
QReg execute(const KernelRegistry& registry, const CompiledKernel& k, const ArgPack& pack,
             const ExecOptions& opts = {});

/// Sum of c_t <t> over the terms of `op` on the kernel's final state; exact
/// when shots == 0, sampled per term otherwise. Throws NonHermitianObservable
/// and NonUnitarySubcircuit (the kernel must not measure).
double observe(const KernelRegistry& registry, const CompiledKernel& k, const PauliOperator& op,
               const ArgPack& pack, const ExecOptions& opts = {});

/// Exact <psi| op |psi> for a state on n qubits.
double expectation(const std::vector<Complex>& state, const PauliOperator& op, int num_qubits);

/// Traced circuit tree. Throws as flatten does.
Composite extract_composite(const KernelRegistry& registry, const CompiledKernel& k,
                            const ArgPack& pack, bool optimize = false);

/// Throws NonUnitarySubcircuit when the circuit measures or resets.
Matrix as_unitary_matrix(const KernelRegistry& registry, const CompiledKernel& k,
                         const ArgPack& pack);

std::string openqasm(const KernelRegistry& registry, const CompiledKernel& k, const ArgPack& pack);

/// OpenQASM 2.0 text over qelib1 gates. Multi-controlled gates and fSim are
/// expanded first; X with two controls is kept as ccx.
std::string to_openqasm(const std::vector<Instruction>& instrs, int num_qubits);

}  // namespace qk
