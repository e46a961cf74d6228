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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qk/pauli.hpp"

namespace qk {

/// One ladder operator: (mode, creation?).
using Ladder = std::pair<int, bool>;
using FermionWord = std::vector<Ladder>;

/// Sum of products of ladder operators, in insertion order.
class FermionOperator {
 public:
  using Term = std::pair<FermionWord, Complex>;

  FermionOperator() = default;
  /// Word in `1^ 0` notation; the empty word is the identity.
  FermionOperator(std::string_view word, Complex coeff);

  void add_term(const FermionWord& word, Complex coeff);
  const std::vector<Term>& terms() const { return terms_; }
  int max_mode() const;

  FermionOperator operator+(const FermionOperator& o) const;

  /// `0.5 [0^ 0] + -0.25 [1 0^]`.
  std::string to_string() const;

  friend bool operator==(const FermionOperator&, const FermionOperator&) = default;

 private:
  std::vector<Term> terms_;
};

FermionWord parse_fermion_word(std::string_view word);

/// Sum of `coeff [word]` terms; a bare word has coefficient 1, and empty text is
/// the zero operator. Throws MalformedOperator.
FermionOperator parse_fermion(std::string_view text);

/// a_p^dagger -> (X_p - iY_p)/2 with a Z string on modes below p.
PauliOperator jordan_wigner(const FermionOperator& f);

}  // namespace qk
