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
#include <random>
#include <vector>

#include "qk/ir.hpp"

namespace qk {

using Rng = std::mt19937_64;

/// Derives an independent 64-bit seed from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class StateVector {
 public:
  explicit StateVector(int num_qubits);

  int num_qubits() const { return n_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  void set_amplitudes(std::vector<Complex> amps);

  /// Unitary gates only; Measure and Reset throw NonUnitaryGate.
  void apply(const Instruction& instr);

  /// Applies `m` to `targets` (first target most significant) on the subspace
  /// where every control is |1>.
  void apply_matrix(const Matrix& m, const std::vector<int>& targets,
                    const std::vector<int>& controls = {});

  double probability_one(int qubit) const;
  /// Projects onto the given outcome and renormalizes.
  void collapse(int qubit, bool outcome);
  bool measure(int qubit, Rng& rng);
  /// Measure, then flip to |0> if the outcome was 1.
  void reset(int qubit, Rng& rng);

  double norm() const;
  std::vector<double> probabilities() const;

 private:
  std::size_t bit(int qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }
  void check_qubit(int qubit) const;

  int n_;
  std::vector<Complex> amps_;
};

/// Unitary of a gate list on n qubits (columns are the images of basis states).
Matrix circuit_unitary(const std::vector<Instruction>& instrs, int num_qubits);

/// Bitstring for a basis index, q[0] leftmost.
std::string basis_label(std::size_t index, int num_qubits);

}  // namespace qk
