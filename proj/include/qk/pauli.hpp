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

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qk/linalg.hpp"

namespace qk {

/// Qubit index to one of 'X', 'Y', 'Z'; the empty word is the identity.
using PauliWord = std::map<int, char>;

std::string word_to_string(const PauliWord& w);

/// Complex-weighted sum of Pauli words. Terms keep insertion order; adding an
/// existing word accumulates into it, and terms with |c| < 1e-14 are pruned.
class PauliOperator {
 public:
  using Term = std::pair<PauliWord, Complex>;

  PauliOperator() = default;
  static PauliOperator identity(Complex coeff = 1.0);
  /// `p` is 'X', 'Y', 'Z' or 'I'.
  static PauliOperator single(char p, int qubit, Complex coeff = 1.0);

  void add_term(const PauliWord& word, Complex coeff);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Highest qubit index used, or -1.
  int max_qubit() const;
  /// Every coefficient has |Im c| <= tol.
  bool is_hermitian(double tol = 1e-10) const;

  PauliOperator operator+(const PauliOperator& o) const;
  PauliOperator operator-(const PauliOperator& o) const;
  PauliOperator operator*(const PauliOperator& o) const;
  PauliOperator operator*(Complex s) const;
  PauliOperator operator-() const;

  /// `-2.1433 * X(0) * X(1) + 5.907`; parse_pauli reads it back exactly.
  std::string to_string() const;

  /// Same terms in the same order with coefficients equal to within tol.
  bool approx_equal(const PauliOperator& o, double tol = 0.0) const;
  friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void prune();
  std::vector<Term> terms_;
};

/// Product of two words: returns (phase, word).
std::pair<Complex, PauliWord> multiply_words(const PauliWord& a, const PauliWord& b);

/// Accepts sums and products of numbers and `X(0)`/`X0` atoms, with parentheses.
/// Empty text is the zero operator. Throws MalformedOperator.
PauliOperator parse_pauli(std::string_view text);

/// Dense matrix on n qubits (q[0] most significant). Throws IndexOutOfRange.
Matrix pauli_matrix(const PauliOperator& op, int num_qubits);

}  // namespace qk
