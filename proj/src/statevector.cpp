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

#include "qk/statevector.hpp"

#include <cmath>

#include "qk/error.hpp"
#include "qk/gates.hpp"

namespace qk {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 finalizer over the combined input.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 0 || num_qubits > 26) {
    throw Error(ErrorCode::RuntimeError,
                "unsupported register size " + std::to_string(num_qubits));
  }
  amps_.assign(std::size_t{1} << num_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

void StateVector::set_amplitudes(std::vector<Complex> amps) {
  if (amps.size() != amps_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude vector has the wrong length");
  }
  amps_ = std::move(amps);
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= n_) {
    throw Error(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(qubit) +
                                                " is outside a register of size " +
                                                std::to_string(n_));
  }
}

void StateVector::apply(const Instruction& instr) {
  const GateInfo* info = find_gate(instr.name);
  if (info && !info->unitary) {
    throw Error(ErrorCode::NonUnitaryGate, instr.name + " is not a unitary gate");
  }
  validate_instruction(instr);
  Matrix m = base_gate_matrix(instr.name, instr.params);
  if (instr.is_adjoint) m = m.adjoint().eval();
  apply_matrix(m, instr.targets, instr.controls);
}

void StateVector::apply_matrix(const Matrix& m, const std::vector<int>& targets,
                               const std::vector<int>& controls) {
  const std::size_t k = targets.size();
  const std::size_t dim = std::size_t{1} << k;
  if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "gate matrix does not match its target count");
  }
  std::size_t target_mask = 0, control_mask = 0;
  std::vector<std::size_t> tbits(k);
  for (std::size_t j = 0; j < k; ++j) {
    check_qubit(targets[j]);
    tbits[j] = bit(targets[j]);
    target_mask |= tbits[j];
  }
  for (int c : controls) {
    check_qubit(c);
    control_mask |= bit(c);
  }
  // Offsets of each local basis state; local index bit (k-1-j) is target j.
  std::vector<std::size_t> offset(dim, 0);
  for (std::size_t local = 0; local < dim; ++local) {
    for (std::size_t j = 0; j < k; ++j) {
      if (local & (std::size_t{1} << (k - 1 - j))) offset[local] |= tbits[j];
    }
  }
  std::vector<Complex> in(dim), out(dim);
  for (std::size_t base = 0; base < amps_.size(); ++base) {
    if (base & target_mask) continue;
    if ((base & control_mask) != control_mask) continue;
    for (std::size_t a = 0; a < dim; ++a) in[a] = amps_[base | offset[a]];
    for (std::size_t r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      out[r] = acc;
    }
    for (std::size_t a = 0; a < dim; ++a) amps_[base | offset[a]] = out[a];
  }
}

double StateVector::probability_one(int qubit) const {
  check_qubit(qubit);
  std::size_t b = bit(qubit);
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & b) p += std::norm(amps_[i]);
  }
  return p;
}

void StateVector::collapse(int qubit, bool outcome) {
  check_qubit(qubit);
  std::size_t b = bit(qubit);
  double keep = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (static_cast<bool>(i & b) != outcome) amps_[i] = 0.0;
    else keep += std::norm(amps_[i]);
  }
  if (keep <= 0.0) throw Error(ErrorCode::RuntimeError, "collapse onto a zero-probability outcome");
  double scale = 1.0 / std::sqrt(keep);
  for (auto& a : amps_) a *= scale;
}

bool StateVector::measure(int qubit, Rng& rng) {
  double p1 = probability_one(qubit);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool outcome = u(rng) < p1;
  if (p1 <= 0.0) outcome = false;
  if (p1 >= 1.0) outcome = true;
  collapse(qubit, outcome);
  return outcome;
}

void StateVector::reset(int qubit, Rng& rng) {
  if (measure(qubit, rng)) apply(make_gate("X", {qubit}));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

Matrix circuit_unitary(const std::vector<Instruction>& instrs, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  Matrix u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector sv(num_qubits);
    std::vector<Complex> basis(dim, Complex(0.0));
    basis[col] = 1.0;
    sv.set_amplitudes(std::move(basis));
    for (const auto& i : instrs) sv.apply(i);
    for (std::size_t row = 0; row < dim; ++row) {
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = sv.amplitudes()[row];
    }
  }
  return u;
}

std::string basis_label(std::size_t index, int num_qubits) {
  std::string s(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 0; q < num_qubits; ++q) {
    if (index & (std::size_t{1} << (num_qubits - 1 - q))) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

}  // namespace qk
