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

#include "qk/linalg.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "qk/error.hpp"
#include "qk/printer.hpp"

namespace qk {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  if (a.size() == 0) return 0.0;
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  Complex phase = 1.0;
  if (std::abs(a(r, c)) > 1e-300 && std::abs(b(r, c)) > 1e-300) {
    phase = std::polar(1.0, std::arg(a(r, c)) - std::arg(b(r, c)));
  }
  return (a - phase * b).cwiseAbs().maxCoeff();
}

double unitarity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  Matrix d = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& m, double tol) { return unitarity_error(m) < tol; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

int qubit_count(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square and non-empty");
  }
  Eigen::Index dim = m.rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

std::string format_complex(Complex z) {
  double re = z.real() == 0.0 ? 0.0 : z.real();
  double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string out = format_float(re);
  out += std::signbit(im) ? "-" : "+";
  out += format_float(std::abs(im));
  out += "j";
  return out;
}

namespace {

[[noreturn]] void bad_complex(std::string_view text) {
  throw Error(ErrorCode::MalformedOperator, "invalid complex number '" + std::string(text) + "'");
}

double parse_real(std::string_view text, std::string_view whole) {
  if (text.empty()) bad_complex(whole);
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) bad_complex(whole);
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  if (text.empty()) bad_complex(whole);
  if (text.back() != 'j' && text.back() != 'J') return {parse_real(text, whole), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    return {0.0, parse_real(body, whole)};
  }
  double re = parse_real(body.substr(0, split), whole);
  std::string_view im_text = body.substr(split);
  double im;
  if (im_text == "+") im = 1.0;
  else if (im_text == "-") im = -1.0;
  else im = parse_real(im_text, whole);
  return {re, im};
}

Matrix parse_matrix_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  int n = -1;
  if (!(in >> n) || n < 0 || n > 12) {
    throw Error(ErrorCode::DimensionMismatch, "matrix file must start with a qubit count");
  }
  Eigen::Index dim = Eigen::Index{1} << n;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      std::string tok;
      if (!(in >> tok)) {
        throw Error(ErrorCode::DimensionMismatch, "matrix file has too few entries");
      }
      m(i, j) = parse_complex(tok);
    }
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::DimensionMismatch, "matrix file has too many entries");
  return m;
}

std::string format_matrix_text(const Matrix& m) {
  std::string out = std::to_string(qubit_count(m)) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_complex(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace qk
