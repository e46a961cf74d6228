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

#include "qk/fermion.hpp"

#include <cctype>
#include <cstdlib>

#include "qk/error.hpp"
#include "qk/printer.hpp"

namespace qk {

FermionOperator::FermionOperator(std::string_view word, Complex coeff) {
  add_term(parse_fermion_word(word), coeff);
}

void FermionOperator::add_term(const FermionWord& word, Complex coeff) {
  for (auto& [w, c] : terms_) {
    if (w == word) {
      c += coeff;
      std::erase_if(terms_, [](const Term& t) { return std::abs(t.second) < 1e-14; });
      return;
    }
  }
  if (std::abs(coeff) >= 1e-14) terms_.emplace_back(word, coeff);
}

int FermionOperator::max_mode() const {
  int m = -1;
  for (const auto& [w, c] : terms_) {
    for (const auto& [mode, dag] : w) m = std::max(m, mode);
  }
  return m;
}

FermionOperator FermionOperator::operator+(const FermionOperator& o) const {
  FermionOperator out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

std::string FermionOperator::to_string() const {
  std::string out;
  for (const auto& [w, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.imag() == 0.0 ? format_float(c.real()) : "(" + format_complex(c) + ")";
    out += " [";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(w[i].first);
      if (w[i].second) out += '^';
    }
    out += "]";
  }
  return out;
}

namespace {

[[noreturn]] void malformed(const std::string& msg, std::string_view text) {
  throw Error(ErrorCode::MalformedOperator, msg + " in '" + std::string(text) + "'");
}

}  // namespace

FermionWord parse_fermion_word(std::string_view word) {
  FermionWord out;
  std::size_t i = 0;
  while (i < word.size()) {
    if (std::isspace(static_cast<unsigned char>(word[i]))) {
      ++i;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(word[i]))) malformed("expected a mode index", word);
    std::size_t start = i;
    while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
    int mode = std::atoi(std::string(word.substr(start, i - start)).c_str());
    bool dag = i < word.size() && word[i] == '^';
    if (dag) ++i;
    out.emplace_back(mode, dag);
  }
  return out;
}

FermionOperator parse_fermion(std::string_view text) {
  FermionOperator out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '\\')) ++i;
  };
  skip();
  if (i == text.size()) return out;
  double sign = 1.0;
  for (;;) {
    skip();
    while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip();
    }
    Complex coeff = 1.0;
    if (i < text.size() && text[i] == '(') {
      std::size_t close = text.find(')', i);
      if (close == std::string_view::npos) malformed("unbalanced '('", text);
      coeff = parse_complex(text.substr(i, close - i + 1));
      i = close + 1;
    } else if (i < text.size() && text[i] != '[' &&
               (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      // A number followed by '[' or '*' is a coefficient; otherwise this is a bare word.
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '[' && text[j] != '*' && text[j] != '^')
        ++j;
      std::size_t k = j;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      bool is_coeff = k < text.size() && (text[k] == '[' || text[k] == '*');
      if (j < text.size() && text[j] == '^') is_coeff = false;
      if (is_coeff) {
        coeff = parse_complex(text.substr(i, j - i));
        i = k;
        if (i < text.size() && text[i] == '*') ++i;
        skip();
      }
    }
    FermionWord word;
    if (i < text.size() && text[i] == '[') {
      std::size_t close = text.find(']', i);
      if (close == std::string_view::npos) malformed("unbalanced '['", text);
      word = parse_fermion_word(text.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      std::size_t start = i;
      while (i < text.size() && text[i] != '+' && text[i] != '-') ++i;
      word = parse_fermion_word(text.substr(start, i - start));
      if (word.empty() && coeff == Complex(1.0)) malformed("empty term", text);
    }
    out.add_term(word, sign * coeff);
    sign = 1.0;
    skip();
    if (i == text.size()) break;
    if (text[i] != '+' && text[i] != '-') malformed("expected '+' or '-'", text);
  }
  return out;
}

PauliOperator jordan_wigner(const FermionOperator& f) {
  const Complex I(0, 1);
  PauliOperator out;
  for (const auto& [word, coeff] : f.terms()) {
    PauliOperator term = PauliOperator::identity(coeff);
    for (const auto& [mode, dag] : word) {
      PauliOperator z = PauliOperator::identity();
      for (int k = 0; k < mode; ++k) z = z * PauliOperator::single('Z', k);
      PauliOperator ladder = PauliOperator::single('X', mode, 0.5) +
                             PauliOperator::single('Y', mode, dag ? -0.5 * I : 0.5 * I);
      term = term * (z * ladder);
    }
    out = out + term;
  }
  return out;
}

}  // namespace qk
