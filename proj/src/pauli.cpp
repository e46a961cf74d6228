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

#include "qk/pauli.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "qk/error.hpp"
#include "qk/ir.hpp"
#include "qk/printer.hpp"

namespace qk {

std::string word_to_string(const PauliWord& w) {
  std::string s;
  for (const auto& [q, p] : w) {
    if (!s.empty()) s += " * ";
    s += p;
    s += "(" + std::to_string(q) + ")";
  }
  return s.empty() ? "I" : s;
}

PauliOperator PauliOperator::identity(Complex coeff) {
  PauliOperator op;
  op.add_term({}, coeff);
  return op;
}

PauliOperator PauliOperator::single(char p, int qubit, Complex coeff) {
  if (qubit < 0) throw Error(ErrorCode::MalformedOperator, "negative qubit index");
  PauliOperator op;
  if (p == 'I') {
    op.add_term({}, coeff);
  } else if (p == 'X' || p == 'Y' || p == 'Z') {
    op.add_term({{qubit, p}}, coeff);
  } else {
    throw Error(ErrorCode::MalformedOperator, std::string("unknown Pauli '") + p + "'");
  }
  return op;
}

void PauliOperator::add_term(const PauliWord& word, Complex coeff) {
  for (auto& [w, c] : terms_) {
    if (w == word) {
      c += coeff;
      prune();
      return;
    }
  }
  terms_.emplace_back(word, coeff);
  prune();
}

void PauliOperator::prune() {
  std::erase_if(terms_, [](const Term& t) { return std::abs(t.second) < 1e-14; });
}

int PauliOperator::max_qubit() const {
  int m = -1;
  for (const auto& [w, c] : terms_) {
    if (!w.empty()) m = std::max(m, w.rbegin()->first);
  }
  return m;
}

bool PauliOperator::is_hermitian(double tol) const {
  for (const auto& [w, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

PauliOperator PauliOperator::operator+(const PauliOperator& o) const {
  PauliOperator out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

PauliOperator PauliOperator::operator-(const PauliOperator& o) const { return *this + (-o); }

PauliOperator PauliOperator::operator-() const { return *this * Complex(-1.0); }

PauliOperator PauliOperator::operator*(Complex s) const {
  PauliOperator out;
  for (const auto& [w, c] : terms_) out.add_term(w, c * s);
  return out;
}

std::pair<Complex, PauliWord> multiply_words(const PauliWord& a, const PauliWord& b) {
  const Complex I(0, 1);
  Complex phase = 1.0;
  PauliWord out = a;
  for (const auto& [q, p] : b) {
    auto it = out.find(q);
    if (it == out.end()) {
      out.emplace(q, p);
      continue;
    }
    char l = it->second;
    if (l == p) {
      out.erase(it);
      continue;
    }
    // XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
    auto idx = [](char c) { return c == 'X' ? 0 : c == 'Y' ? 1 : 2; };
    int li = idx(l), ri = idx(p);
    int k = 3 - li - ri;
    phase *= ((li + 1) % 3 == ri) ? I : -I;
    it->second = "XYZ"[k];
  }
  return {phase, out};
}

PauliOperator PauliOperator::operator*(const PauliOperator& o) const {
  PauliOperator out;
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : o.terms_) {
      auto [phase, w] = multiply_words(wa, wb);
      out.add_term(w, phase * ca * cb);
    }
  }
  return out;
}

namespace {

std::string format_coeff(Complex c, bool leading, std::string& sign) {
  if (c.imag() == 0.0) {
    double re = c.real();
    if (std::signbit(re) && !leading) {
      sign = " - ";
      return format_float(-re);
    }
    sign = leading ? "" : " + ";
    return format_float(re);
  }
  sign = leading ? "" : " + ";
  return "(" + format_complex(c) + ")";
}

}  // namespace

std::string PauliOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool leading = true;
  for (const auto& [w, c] : terms_) {
    std::string sign;
    std::string coeff = format_coeff(c, leading, sign);
    out += sign + coeff;
    for (const auto& [q, p] : w) {
      out += " * ";
      out += p;
      out += "(" + std::to_string(q) + ")";
    }
    leading = false;
  }
  return out;
}

bool PauliOperator::approx_equal(const PauliOperator& o, double tol) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first != o.terms_[i].first) return false;
    if (std::abs(terms_[i].second - o.terms_[i].second) > tol) return false;
  }
  return true;
}

namespace {

class PauliParser {
 public:
  explicit PauliParser(std::string_view text) : s_(text) {}

  PauliOperator parse() {
    skip_ws();
    if (pos_ == s_.size()) return {};
    PauliOperator op = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return op;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::MalformedOperator,
                msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '\\')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PauliOperator expr() {
    PauliOperator acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  PauliOperator term() {
    PauliOperator acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  PauliOperator factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of operator");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '+') {
      ++pos_;
      return factor();
    }
    if (c == '(') {
      ++pos_;
      PauliOperator inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'X' || c == 'Y' || c == 'Z' || c == 'I') {
      ++pos_;
      bool paren = accept('(');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) {
        if (c == 'I' && !paren) return PauliOperator::identity();
        fail("expected a qubit index");
      }
      int q = std::atoi(std::string(s_.substr(start, pos_ - start)).c_str());
      if (paren && !accept(')')) fail("expected ')'");
      return PauliOperator::single(c, q);
    }
    if (c == 'j') {
      ++pos_;
      return PauliOperator::identity(Complex(0, 1));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  PauliOperator number() {
    std::string tmp(s_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - tmp.c_str());
    if (pos_ < s_.size() && (s_[pos_] == 'j' || s_[pos_] == 'J')) {
      ++pos_;
      return PauliOperator::identity(Complex(0, v));
    }
    return PauliOperator::identity(Complex(v, 0));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PauliOperator parse_pauli(std::string_view text) { return PauliParser(text).parse(); }

Matrix pauli_matrix(const PauliOperator& op, int num_qubits) {
  if (op.max_qubit() >= num_qubits) {
    throw Error(ErrorCode::IndexOutOfRange, "operator acts on qubit " +
                                                std::to_string(op.max_qubit()) + " but n = " +
                                                std::to_string(num_qubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [w, c] : op.terms()) {
    Matrix m = Matrix::Identity(1, 1);
    for (int q = 0; q < num_qubits; ++q) {
      auto it = w.find(q);
      Matrix p = it == w.end() ? Matrix(Matrix::Identity(2, 2))
                               : base_gate_matrix(std::string(1, it->second), {});
      m = kron(m, p);
    }
    out += c * m;
  }
  return out;
}

}  // namespace qk
