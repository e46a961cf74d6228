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

#include "qk/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qk/error.hpp"
#include "qk/statevector.hpp"
#include "qk/transforms.hpp"

namespace qk {

namespace {

using std::numbers::pi;
constexpr double kUnitaryTol = 1e-8;
constexpr double kZero = 1e-12;

double wrap_angle(double x) {
  x = std::remainder(x, 2 * pi);
  if (x <= -pi) x += 2 * pi;
  return x;
}

void require_unitary(const Matrix& u, int expected_qubits = -1) {
  int n = qubit_count(u);
  if (expected_qubits >= 0 && n != expected_qubits) {
    throw Error(ErrorCode::DimensionMismatch, "expected a " + std::to_string(1 << expected_qubits) +
                                                  "x" + std::to_string(1 << expected_qubits) +
                                                  " matrix");
  }
  double err = unitarity_error(u);
  if (!(err < kUnitaryTol)) {
    throw Error(ErrorCode::NonUnitaryInput,
                "matrix is not unitary (max |UU^dagger - I| = " + std::to_string(err) + ")");
  }
}

Matrix rz(double t) { return base_gate_matrix("Rz", {t}); }
Matrix ry(double t) { return base_gate_matrix("Ry", {t}); }
Matrix rx(double t) { return base_gate_matrix("Rx", {t}); }

void push_rotation(std::vector<Instruction>& out, const char* name, int q, double angle) {
  if (std::abs(angle) < kZero) return;
  out.push_back(make_gate(name, {q}, {angle}));
}

void push_cx(std::vector<Instruction>& out, int c, int t) { out.push_back(make_gate("CX", {c, t})); }

}  // namespace

std::optional<SynthesisMethod> parse_synthesis_method(std::string_view name) {
  if (name == "default") return SynthesisMethod::Default;
  if (name == "zyz") return SynthesisMethod::Zyz;
  if (name == "kak") return SynthesisMethod::Kak;
  if (name == "two_level" || name == "two-level") return SynthesisMethod::TwoLevel;
  return std::nullopt;
}

std::string_view synthesis_method_name(SynthesisMethod m) noexcept {
  switch (m) {
    case SynthesisMethod::Default: return "default";
    case SynthesisMethod::Zyz: return "zyz";
    case SynthesisMethod::Kak: return "kak";
    case SynthesisMethod::TwoLevel: return "two_level";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ZYZ

Matrix zyz_matrix(const ZyzAngles& a) {
  return std::polar(1.0, a.alpha) * rz(a.beta) * ry(a.gamma) * rz(a.delta);
}

ZyzAngles zyz(const Matrix& u) {
  require_unitary(u, 1);
  Matrix v = u / std::sqrt(u.determinant());
  double m00 = std::abs(v(0, 0)), m10 = std::abs(v(1, 0));
  ZyzAngles out;
  out.gamma = 2 * std::atan2(m10, m00);
  if (m10 < kZero) {
    out.beta = 2 * std::arg(v(1, 1));
  } else if (m00 < kZero) {
    out.beta = 2 * std::arg(v(1, 0));
  } else {
    double sum = 2 * std::arg(v(1, 1));
    double diff = 2 * std::arg(v(1, 0));
    out.beta = (sum + diff) / 2;
    out.delta = (sum - diff) / 2;
  }
  out.beta = wrap_angle(out.beta);
  out.delta = wrap_angle(out.delta);
  if (std::abs(out.beta) < kZero) out.beta = 0;
  if (std::abs(out.delta) < kZero) out.delta = 0;
  if (std::abs(out.gamma) < kZero) out.gamma = 0;
  Matrix r = zyz_matrix(out);
  Eigen::Index i = 0, j = 0;
  u.cwiseAbs().maxCoeff(&i, &j);
  out.alpha = wrap_angle(std::arg(u(i, j)) - std::arg(r(i, j)));
  if (std::abs(out.alpha) < kZero) out.alpha = 0;
  return out;
}

std::vector<Instruction> zyz_circuit(const Matrix& u, int target) {
  ZyzAngles a = zyz(u);
  std::vector<Instruction> out;
  push_rotation(out, "Rz", target, a.delta);
  push_rotation(out, "Ry", target, a.gamma);
  push_rotation(out, "Rz", target, a.beta);
  return out;
}

// ---------------------------------------------------------------------------
// Controlled single-qubit unitaries

namespace {

Matrix unitary_sqrt(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  Matrix t = schur.matrixT();
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::sqrt(t(0, 0));
  d(1, 1) = std::sqrt(t(1, 1));
  return schur.matrixU() * d * schur.matrixU().adjoint();
}

void single_controlled(const Matrix& u, int control, int target, std::vector<Instruction>& out) {
  ZyzAngles a = zyz(u);
  // u = e^{i alpha} A X B X C with ABC = I.
  push_rotation(out, "Rz", target, (a.delta - a.beta) / 2);
  push_cx(out, control, target);
  push_rotation(out, "Rz", target, -(a.delta + a.beta) / 2);
  push_rotation(out, "Ry", target, -a.gamma / 2);
  push_cx(out, control, target);
  push_rotation(out, "Ry", target, a.gamma / 2);
  push_rotation(out, "Rz", target, a.beta);
  push_rotation(out, "Rz", control, a.alpha);
}

void multi_controlled(const Matrix& u, const std::vector<int>& controls, int target,
                      std::vector<Instruction>& out) {
  if (controls.empty()) {
    auto g = zyz_circuit(u, target);
    out.insert(out.end(), g.begin(), g.end());
    return;
  }
  if (controls.size() == 1) {
    single_controlled(u, controls[0], target, out);
    return;
  }
  Matrix v = unitary_sqrt(u);
  Matrix x = base_gate_matrix("X", {});
  int last = controls.back();
  std::vector<int> rest(controls.begin(), controls.end() - 1);
  single_controlled(v, last, target, out);
  multi_controlled(x, rest, last, out);
  single_controlled(v.adjoint(), last, target, out);
  multi_controlled(x, rest, last, out);
  multi_controlled(v, rest, target, out);
}

}  // namespace

std::vector<Instruction> controlled_unitary(const Matrix& u, const std::vector<int>& controls,
                                            int target) {
  require_unitary(u, 1);
  std::vector<Instruction> out;
  multi_controlled(u, controls, target, out);
  return out;
}

// ---------------------------------------------------------------------------
// KAK

namespace {

Matrix magic_basis() {
  const Complex I(0, 1);
  Matrix b(4, 4);
  b << 1, 0, 0, I,
       0, I, 1, 0,
       0, I, -1, 0,
       1, 0, 0, -I;
  return b / std::sqrt(2.0);
}

Matrix pauli2(char p) {
  Matrix m = base_gate_matrix(std::string(1, p), {});
  return kron(m, m);
}

struct KakParts {
  Matrix k1, k2;  // local factors: u ~ k1 * N(a, b, c) * k2
  double a = 0, b = 0, c = 0;
};

KakParts kak_parts(const Matrix& u_in) {
  require_unitary(u_in, 2);
  Complex det = u_in.determinant();
  Matrix u = u_in / std::pow(det, 0.25);
  Matrix B = magic_basis();
  Matrix up = B.adjoint() * u * B;
  Matrix m2 = up.transpose() * up;

  Eigen::Matrix4d re = m2.real(), im = m2.imag();
  Eigen::Matrix4d p;
  Matrix d;
  bool ok = false;
  for (double r : {0.5772156649, 1.6180339887, 0.3183098862, 2.7182818284, 0.1234567891}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(re + r * im);
    p = es.eigenvectors();
    d = p.transpose().cast<Complex>() * m2 * p.cast<Complex>();
    Matrix off = d;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() < 1e-9) {
      ok = true;
      break;
    }
  }
  if (!ok) throw Error(ErrorCode::RuntimeError, "kak: failed to diagonalize the magic-basis form");
  if (p.determinant() < 0) {
    p.col(0) = -p.col(0);
  }
  Eigen::Vector4cd f;
  Complex prod = 1.0;
  for (int k = 0; k < 4; ++k) {
    f(k) = std::sqrt(d(k, k));
    prod *= f(k);
  }
  if (prod.real() < 0) f(0) = -f(0);
  Matrix pc = p.cast<Complex>();
  Matrix k1p = up * pc * f.cwiseInverse().asDiagonal();
  KakParts out;
  out.k1 = B * k1p * B.adjoint();
  out.k2 = B * pc.transpose() * B.adjoint();

  // theta_k = a*xx_k + b*yy_k + c*zz_k + g over the magic-basis diagonals.
  Eigen::Matrix4d sys;
  Eigen::Vector4d theta;
  Matrix dx = B.adjoint() * pauli2('X') * B;
  Matrix dy = B.adjoint() * pauli2('Y') * B;
  Matrix dz = B.adjoint() * pauli2('Z') * B;
  for (int k = 0; k < 4; ++k) {
    sys(k, 0) = dx(k, k).real();
    sys(k, 1) = dy(k, k).real();
    sys(k, 2) = dz(k, k).real();
    sys(k, 3) = 1.0;
    theta(k) = std::arg(f(k));
  }
  Eigen::Vector4d coef = sys.fullPivLu().solve(theta);
  double abc[3] = {coef(0), coef(1), coef(2)};
  const char paulis[3] = {'X', 'Y', 'Z'};
  for (int j = 0; j < 3; ++j) {
    double x = abc[j];
    double k = std::ceil((x - pi / 4) / (pi / 2) - 1e-12);
    double reduced = x - k * (pi / 2);
    if (reduced <= -pi / 4 + 1e-12) {
      reduced += pi / 2;
      k -= 1;
    }
    abc[j] = reduced;
    long steps = std::lround(k);
    if (steps % 2 != 0) out.k2 = pauli2(paulis[j]) * out.k2;
  }
  out.a = abc[0];
  out.b = abc[1];
  out.c = abc[2];
  return out;
}

std::pair<Matrix, Matrix> split_local(const Matrix& m) {
  int bi = 0, bj = 0;
  double best = -1;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double nrm = m.block(2 * i, 2 * j, 2, 2).norm();
      if (nrm > best) {
        best = nrm;
        bi = i;
        bj = j;
      }
    }
  }
  Matrix blk = m.block(2 * bi, 2 * bj, 2, 2);
  Matrix b = blk / std::sqrt(blk.determinant());
  Matrix a(2, 2);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      a(k, l) = (b.adjoint() * m.block(2 * k, 2 * l, 2, 2)).trace() / 2.0;
    }
  }
  // Absorb rounding so each factor passes the unitarity gate.
  Eigen::JacobiSVD<Matrix> sa(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  a = sa.matrixU() * sa.matrixV().adjoint();
  Eigen::JacobiSVD<Matrix> sb(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  b = sb.matrixU() * sb.matrixV().adjoint();
  return {a, b};
}

void push_local(std::vector<Instruction>& out, const Matrix& m, int q0, int q1) {
  auto [a, b] = split_local(m);
  auto ga = zyz_circuit(a, q0);
  auto gb = zyz_circuit(b, q1);
  out.insert(out.end(), ga.begin(), ga.end());
  out.insert(out.end(), gb.begin(), gb.end());
}

bool near(double x, double y) { return std::abs(x - y) < 1e-9; }

}  // namespace

KakCoefficients kak_coefficients(const Matrix& u) {
  KakParts p = kak_parts(u);
  return {p.a, p.b, p.c};
}

std::vector<Instruction> kak(const Matrix& u, int q0, int q1) {
  KakParts p = kak_parts(u);
  Matrix left = Matrix::Identity(4, 4);   // applied after the core
  Matrix right = Matrix::Identity(4, 4);  // applied before the core
  std::vector<Instruction> core;

  bool za = near(p.a, 0), zb = near(p.b, 0), zc = near(p.c, 0);
  if (za && zb && zc) {
    // Local only.
  } else if (za || zb || zc) {
    // Reduce to exp(i(s XX + t ZZ)) by a local basis change.
    double s, t;
    if (zb) {
      s = p.a;
      t = p.c;
    } else if (zc) {
      Matrix v = rx(-pi / 2);  // v Z v^dagger = Y, v X v^dagger = X
      left = kron(v, v);
      right = left.adjoint();
      s = p.a;
      t = p.b;
    } else {
      Matrix w = rz(pi / 2);  // w X w^dagger = Y
      left = kron(w, w);
      right = left.adjoint();
      s = p.b;
      t = p.c;
    }
    if (near(s, 0) && near(std::abs(t), pi / 4)) {
      // exp(i t ZZ) ~ CZ (Rz(-2t) x Rz(-2t)).
      push_rotation(core, "Rz", q0, -2 * t);
      push_rotation(core, "Rz", q1, -2 * t);
      core.push_back(make_gate("H", {q1}));
      push_cx(core, q0, q1);
      core.push_back(make_gate("H", {q1}));
    } else if (near(t, 0) && near(std::abs(s), pi / 4)) {
      Matrix h = base_gate_matrix("H", {});
      left = left * kron(h, h);
      right = kron(h, h) * right;
      push_rotation(core, "Rz", q0, -2 * s);
      push_rotation(core, "Rz", q1, -2 * s);
      core.push_back(make_gate("H", {q1}));
      push_cx(core, q0, q1);
      core.push_back(make_gate("H", {q1}));
    } else {
      push_cx(core, q0, q1);
      push_rotation(core, "Rx", q0, -2 * s);
      push_rotation(core, "Rz", q1, -2 * t);
      push_cx(core, q0, q1);
    }
  } else {
    push_rotation(core, "Rz", q1, -pi / 2);
    push_cx(core, q1, q0);
    push_rotation(core, "Rz", q0, pi / 2 - 2 * p.c);
    push_rotation(core, "Ry", q1, 2 * p.a - pi / 2);
    push_cx(core, q0, q1);
    push_rotation(core, "Ry", q1, pi / 2 - 2 * p.b);
    push_cx(core, q1, q0);
    push_rotation(core, "Rz", q0, pi / 2);
  }
  std::vector<Instruction> out;
  push_local(out, right * p.k2, q0, q1);
  out.insert(out.end(), core.begin(), core.end());
  push_local(out, p.k1 * left, q0, q1);
  return peephole_optimize(out);
}

// ---------------------------------------------------------------------------
// Two-level

namespace {

struct TwoLevelOp {
  std::size_t s, t;
  Matrix g;  // 2x2 acting on (|s>, |t>)
};

void apply_rows(Matrix& v, const TwoLevelOp& op) {
  auto s = static_cast<Eigen::Index>(op.s), t = static_cast<Eigen::Index>(op.t);
  Eigen::RowVectorXcd rs = v.row(s), rt = v.row(t);
  v.row(s) = op.g(0, 0) * rs + op.g(0, 1) * rt;
  v.row(t) = op.g(1, 0) * rs + op.g(1, 1) * rt;
}

void emit_mc(const Matrix& u, const std::vector<std::pair<int, bool>>& controls, int target,
             std::vector<Instruction>& out) {
  std::vector<int> qs;
  for (auto [q, value] : controls) {
    if (!value) out.push_back(make_gate("X", {q}));
    qs.push_back(q);
  }
  multi_controlled(u, qs, target, out);
  for (auto [q, value] : controls) {
    if (!value) out.push_back(make_gate("X", {q}));
  }
}

void emit_two_level(const TwoLevelOp& op, const std::vector<int>& qubits,
                    std::vector<Instruction>& out) {
  const int n = static_cast<int>(qubits.size());
  auto bit_of = [&](std::size_t state, int p) {
    return ((state >> (n - 1 - p)) & 1U) != 0;
  };
  // Gray path from s to t, flipping differing bits from the most significant.
  std::vector<std::size_t> path{op.s};
  std::vector<int> flips;
  std::size_t cur = op.s;
  for (int p = 0; p < n; ++p) {
    if (bit_of(cur, p) != bit_of(op.t, p)) {
      cur ^= std::size_t{1} << (n - 1 - p);
      path.push_back(cur);
      flips.push_back(p);
    }
  }
  const Matrix x = base_gate_matrix("X", {});
  auto controls_except = [&](std::size_t state, int skip) {
    std::vector<std::pair<int, bool>> c;
    for (int p = 0; p < n; ++p) {
      if (p != skip) c.emplace_back(qubits[static_cast<std::size_t>(p)], bit_of(state, p));
    }
    return c;
  };
  const std::size_t k = flips.size();
  std::vector<std::vector<Instruction>> swaps(k - 1);
  for (std::size_t m = 0; m + 1 < k; ++m) {
    int fp = flips[m];
    emit_mc(x, controls_except(path[m], fp), qubits[static_cast<std::size_t>(fp)], swaps[m]);
    out.insert(out.end(), swaps[m].begin(), swaps[m].end());
  }
  int p = flips.back();
  Matrix g = op.g;
  if (bit_of(path[k - 1], p)) g = x * g * x;
  emit_mc(g, controls_except(path[k - 1], p), qubits[static_cast<std::size_t>(p)], out);
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt) out.push_back(adjoint_instruction(*jt));
  }
}

}  // namespace

std::vector<Instruction> two_level(const Matrix& u, const std::vector<int>& qubits) {
  require_unitary(u);
  const int n = qubit_count(u);
  if (static_cast<int>(qubits.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "matrix acts on " + std::to_string(n) +
                                                  " qubits but " + std::to_string(qubits.size()) +
                                                  " were given");
  }
  if (n == 0) return {};
  if (n == 1) return zyz_circuit(u, qubits[0]);
  const auto dim = static_cast<std::size_t>(u.rows());
  Complex det = u.determinant();
  Matrix v = u / std::pow(det, 1.0 / static_cast<double>(dim));
  std::vector<TwoLevelOp> ops;
  for (std::size_t j = 0; j + 1 < dim; ++j) {
    auto jj = static_cast<Eigen::Index>(j);
    for (std::size_t i = j + 1; i < dim; ++i) {
      auto ii = static_cast<Eigen::Index>(i);
      Complex b = v(ii, jj);
      if (std::abs(b) < kZero) {
        v(ii, jj) = 0.0;
        continue;
      }
      Complex a = v(jj, jj);
      double r = std::hypot(std::abs(a), std::abs(b));
      TwoLevelOp op{j, i, Matrix(2, 2)};
      op.g << std::conj(a) / r, std::conj(b) / r, -b / r, a / r;
      apply_rows(v, op);
      v(ii, jj) = 0.0;
      ops.push_back(std::move(op));
    }
    Complex a = v(jj, jj);
    if (std::abs(a - 1.0) > kZero) {
      TwoLevelOp op{j, j + 1, Matrix::Zero(2, 2)};
      op.g(0, 0) = std::conj(a) / std::abs(a);
      op.g(1, 1) = a / std::abs(a);
      apply_rows(v, op);
      ops.push_back(std::move(op));
    }
  }
  std::vector<Instruction> out;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    TwoLevelOp inv{it->s, it->t, it->g.adjoint()};
    emit_two_level(inv, qubits, out);
  }
  return peephole_optimize(out);
}

// ---------------------------------------------------------------------------

Composite synthesize(const Matrix& m, const std::vector<int>& targets, SynthesisMethod method) {
  require_unitary(m);
  const int n = qubit_count(m);
  if (static_cast<int>(targets.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "matrix acts on " + std::to_string(n) +
                                                  " qubits but the register has " +
                                                  std::to_string(targets.size()));
  }
  if (method == SynthesisMethod::Default) {
    method = n == 1 ? SynthesisMethod::Zyz : n == 2 ? SynthesisMethod::Kak : SynthesisMethod::TwoLevel;
  }
  std::vector<Instruction> gates;
  switch (method) {
    case SynthesisMethod::Zyz:
      if (n != 1) throw Error(ErrorCode::DimensionMismatch, "zyz needs a 2x2 matrix");
      gates = zyz_circuit(m, targets[0]);
      break;
    case SynthesisMethod::Kak:
      if (n != 2) throw Error(ErrorCode::DimensionMismatch, "kak needs a 4x4 matrix");
      gates = kak(m, targets[0], targets[1]);
      break;
    case SynthesisMethod::TwoLevel:
    case SynthesisMethod::Default:
      gates = two_level(m, targets);
      break;
  }
  Composite out;
  out.name = "decompose";
  for (auto& g : peephole_optimize(gates)) out.children.emplace_back(std::move(g));
  return out;
}

std::vector<Instruction> decompose_to_basic(const Instruction& instr) {
  if (instr.controls.empty() && instr.name != "fSim") return {instr};
  if (instr.name == "Measure" || instr.name == "Reset") {
    throw Error(ErrorCode::NonUnitarySubcircuit, "controlled " + instr.name);
  }
  Matrix base = base_gate_matrix(instr.name, instr.params);
  if (instr.is_adjoint) base = base.adjoint().eval();
  std::vector<Instruction> out;
  if (base.rows() == 2) {
    out = controlled_unitary(base, instr.controls, instr.targets[0]);
    return out;
  }
  const int a = instr.targets[0], b = instr.targets[1];
  if (instr.name == "Swap") {
    for (auto [c, t] : {std::pair{a, b}, std::pair{b, a}, std::pair{a, b}}) {
      Instruction cx = make_gate("CX", {c, t});
      cx.controls = instr.controls;
      auto part = decompose_to_basic(cx);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (instr.name != "fSim") {
    // Control-target gates: fold the first target into the control list.
    Matrix u = base.block(2, 2, 2, 2);
    std::vector<int> controls = instr.controls;
    controls.push_back(a);
    return controlled_unitary(u, controls, b);
  }
  std::vector<Instruction> body = kak(base, a, b);
  if (instr.controls.empty()) return body;
  // The kak circuit matches up to a phase, which matters once controlled.
  Matrix w = circuit_unitary(
      [&] {
        std::vector<Instruction> local = body;
        for (auto& g : local) {
          for (int& q : g.targets) q = q == a ? 0 : 1;
        }
        return local;
      }(),
      2);
  Eigen::Index r = 0, c = 0;
  base.cwiseAbs().maxCoeff(&r, &c);
  double phase = std::arg(base(r, c)) - std::arg(w(r, c));
  for (Instruction g : body) {
    g.controls = instr.controls;
    auto part = decompose_to_basic(canonicalize_controls(g));
    out.insert(out.end(), part.begin(), part.end());
  }
  Matrix ph = Matrix::Identity(2, 2);
  ph(1, 1) = std::polar(1.0, phase);
  std::vector<int> rest(instr.controls.begin(), instr.controls.end() - 1);
  auto fix = controlled_unitary(ph, rest, instr.controls.back());
  out.insert(out.end(), fix.begin(), fix.end());
  return out;
}

std::size_t count_gate(const std::vector<Instruction>& instrs, std::string_view name) {
  return static_cast<std::size_t>(std::count_if(
      instrs.begin(), instrs.end(), [&](const Instruction& i) { return i.name == name; }));
}

}  // namespace qk
