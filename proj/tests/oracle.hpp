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

// Test-side reference math. Built from first principles so that library
// results are checked against something other than the library itself.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qk/qjit.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline const C kI{0.0, 1.0};

inline Mat mat2(C a, C b, C c, C d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat pauli(char p) {
  switch (p) {
    case 'X': return mat2(0, 1, 1, 0);
    case 'Y': return mat2(0, -kI, kI, 0);
    case 'Z': return mat2(1, 0, 0, -1);
    default: return Mat::Identity(2, 2);
  }
}

inline Mat hadamard() { return mat2(1, 1, 1, -1) / std::sqrt(2.0); }

inline Mat ry(double t) { return mat2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)); }
inline Mat rx(double t) {
  return mat2(std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2));
}
inline Mat rz(double t) { return mat2(std::exp(-kI * t / 2.0), 0, 0, std::exp(kI * t / 2.0)); }

/// Tensor product by explicit index arithmetic.
inline Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Single-qubit `u` on qubit q of n (q = 0 is the leftmost tensor factor),
/// applied only where every control qubit is 1.
inline Mat on_qubit(const Mat& u, int q, int n, const std::vector<int>& controls = {}) {
  const std::size_t dim = std::size_t{1} << n;
  Mat out = Mat::Zero(dim, dim);
  auto bit = [&](std::size_t idx, int qubit) { return (idx >> (n - 1 - qubit)) & 1U; };
  for (std::size_t col = 0; col < dim; ++col) {
    bool active = true;
    for (int c : controls) active = active && bit(col, c);
    if (!active) {
      out(col, col) = 1.0;
      continue;
    }
    std::size_t b = bit(col, q);
    std::size_t base = col & ~(std::size_t{1} << (n - 1 - q));
    for (std::size_t r = 0; r < 2; ++r) {
      out(base | (r << (n - 1 - q)), col) += u(r, b);
    }
  }
  return out;
}

inline Mat cnot(int control, int target, int n) { return on_qubit(pauli('X'), target, n, {control}); }

/// Pauli string such as "XIZ", leftmost letter on qubit 0.
inline Mat pauli_string(const std::string& word) {
  Mat m = Mat::Identity(1, 1);
  for (char p : word) m = tensor(m, pauli(p));
  return m;
}

/// max |a - e^{i phi} b| with phi fixed by the largest entry of b.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  C phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

inline std::string source_path(const std::string& rel) { return std::string(QK_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Memory-only compiler with the given corpus file loaded.
inline std::unique_ptr<qk::QJIT> load_kernels(const std::string& rel) {
  auto jit = std::make_unique<qk::QJIT>(qk::QJITOptions{std::nullopt, false});
  jit->compile_file(read_file(source_path("kernels/" + rel)));
  return jit;
}

}  // namespace oracle
