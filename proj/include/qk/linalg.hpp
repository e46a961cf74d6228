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

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace qk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Largest absolute entry difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// max_ij |a_ij - e^{i alpha} b_ij| with alpha chosen on the largest entry of b.
/// Throws DimensionMismatch when shapes differ.
double phase_aligned_distance(const Matrix& a, const Matrix& b);

/// max_ij |(M M^dagger - I)_ij|; infinity for non-square input.
double unitarity_error(const Matrix& m);

bool is_unitary(const Matrix& m, double tol = 1e-8);

Matrix kron(const Matrix& a, const Matrix& b);

/// Number of qubits n for a 2^n x 2^n matrix; throws DimensionMismatch otherwise.
int qubit_count(const Matrix& m);

/// `re+imj` text with shortest round-trip components.
std::string format_complex(Complex z);

/// Accepts `1`, `-0.5j`, `1e-3+2j`, `(0.5-0.5j)`. Throws MalformedOperator on bad text.
Complex parse_complex(std::string_view text);

/// Matrix file: first line n, then 2^n lines of 2^n whitespace-separated entries.
Matrix parse_matrix_text(std::string_view text);
std::string format_matrix_text(const Matrix& m);

}  // namespace qk
