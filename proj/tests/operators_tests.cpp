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

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

#include "oracle.hpp"
#include "qk/error.hpp"
#include "qk/fermion.hpp"
#include "qk/pauli.hpp"
#include "qk/statevector.hpp"
#include "qk/synthesis.hpp"
#include "qk/transforms.hpp"
#include "qk/trotter.hpp"
#include "qk/vqe.hpp"

using namespace oracle;

namespace {

Mat random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Mat z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = C(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  return q;
}

qk::ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qk::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return qk::ErrorCode::RuntimeError;
}

}  // namespace

TEST(Pauli, ProductsFollowCyclicRule) {
  auto xy = qk::parse_pauli("X0") * qk::parse_pauli("Y0");
  ASSERT_EQ(xy.size(), 1u);
  EXPECT_EQ(xy.terms()[0].first, (qk::PauliWord{{0, 'Z'}}));
  EXPECT_EQ(xy.terms()[0].second, C(0, 1));
  auto yx = qk::parse_pauli("Y0") * qk::parse_pauli("X0");
  EXPECT_EQ(yx.terms()[0].second, C(0, -1));
  auto xx = qk::parse_pauli("X1") * qk::parse_pauli("X1");
  EXPECT_EQ(xx, qk::PauliOperator::identity());
}

TEST(Pauli, DistributesAndCancels) {
  auto a = qk::parse_pauli("(X0 + Z1) * (X0 - Z1)");
  // X0X0 - X0Z1 + Z1X0 - Z1Z1 = 0
  EXPECT_TRUE(a.empty());
  auto h = qk::parse_pauli("-2.1433 * X(0) * X(1) - 2.1433 * Y(0) * Y(1) + .21829 * Z(0) - 6.125 * Z(1) + 5.907");
  EXPECT_EQ(h.size(), 5u);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_EQ(qk::parse_pauli(h.to_string()), h);
  EXPECT_EQ(h.max_qubit(), 1);
}

TEST(Pauli, MalformedText) {
  EXPECT_EQ(error_of([] { qk::parse_pauli("X0 +"); }), qk::ErrorCode::MalformedOperator);
  EXPECT_EQ(error_of([] { qk::parse_pauli("Q3"); }), qk::ErrorCode::MalformedOperator);
  EXPECT_TRUE(qk::parse_pauli("").empty());
}

TEST(Fermion, ParseAndJordanWigner) {
  auto f = qk::parse_fermion("0.0002899 [] - 0.43658 [0^ 0] + 4.2866 [1 0^] - 4.2866 [1^ 0] + 12.25 [1^ 1]");
  EXPECT_EQ(f.terms().size(), 5u);
  EXPECT_EQ(f.max_mode(), 1);
  auto number = qk::jordan_wigner(qk::FermionOperator("0^ 0", 1.0));
  EXPECT_TRUE(number.approx_equal(qk::parse_pauli("0.5 - 0.5 * Z0"), 1e-14)) << number.to_string();
  auto hop = qk::jordan_wigner(qk::parse_fermion("[1^ 0] + [0^ 1]"));
  EXPECT_TRUE(hop.approx_equal(qk::parse_pauli("0.5 * X0 * X1 + 0.5 * Y0 * Y1"), 1e-14))
      << hop.to_string();
  EXPECT_EQ(error_of([] { qk::parse_fermion("1.0 [0^ x]"); }), qk::ErrorCode::MalformedOperator);
}

TEST(Fermion, DeuteronFermionHamiltonianSpectrum) {
  // Ground energy of the fermionic deuteron model equals the lowest eigenvalue
  // of its one-particle block.
  auto h = qk::jordan_wigner(
      qk::parse_fermion("0.0002899 [] - 0.43658 [0^ 0] + 4.2866 [1 0^] - 4.2866 [1^ 0] + 12.25 [1^ 1]"));
  EXPECT_TRUE(h.is_hermitian());
  Mat dense = Mat::Zero(4, 4);
  for (const auto& [word, c] : h.terms()) {
    std::string s = "II";
    for (const auto& [q, p] : word) s[static_cast<std::size_t>(q)] = p;
    dense += c * pauli_string(s);
  }
  Eigen::Matrix2d block;
  block << -0.43658, -4.2866, -4.2866, 12.25;
  double one_particle = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(block).eigenvalues()(0) + 0.0002899;
  // Single-occupancy states are |10> and |01>.
  Eigen::Matrix2cd sub;
  sub << dense(2, 2), dense(2, 1), dense(1, 2), dense(1, 1);
  double got = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(sub).eigenvalues()(0);
  EXPECT_NEAR(got, one_particle, 1e-10);
}

TEST(Trotter, SumOfCommutingTermsIsExact) {
  auto op = qk::parse_pauli("0.3 * Z0 * Z1 + 0.7 * X2 - 0.2 * Z1");
  auto circ = qk::exp_i_theta({0, 1, 2}, 0.9, op);
  Mat got = qk::circuit_unitary(qk::flatten(circ), 3);
  Mat gen = kI * 0.9 * (0.3 * pauli_string("ZZI") + 0.7 * pauli_string("IIX") - 0.2 * pauli_string("IZI"));
  EXPECT_LT((got - Mat(gen.exp())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Trotter, RegisterMappingAndCounts) {
  auto circ = qk::exp_i_theta({4, 2}, 0.5, qk::parse_pauli("X0 * Y1"));
  auto instrs = qk::flatten(circ);
  // H, Rx, CX, Rz, CX, H, Rx.
  EXPECT_EQ(instrs.size(), 7u);
  EXPECT_EQ(qk::count_gate(instrs, "CX"), 2u);
  for (const auto& i : instrs)
    for (int t : i.targets) EXPECT_TRUE(t == 4 || t == 2);
  EXPECT_TRUE(qk::flatten(qk::exp_i_theta({0}, 1.0, qk::parse_pauli("3.0"))).empty());
}

TEST(Trotter, Errors) {
  qk::PauliOperator complex_coeff;
  complex_coeff.add_term({{0, 'X'}}, C(0, 1));
  EXPECT_EQ(error_of([&] { qk::exp_i_theta({0}, 1.0, complex_coeff); }), qk::ErrorCode::NonHermitianGenerator);
  EXPECT_EQ(error_of([] { qk::exp_i_theta({0}, 1.0, qk::parse_pauli("Z3")); }), qk::ErrorCode::IndexOutOfRange);
}

TEST(Synthesis, ZyzReconstructs) {
  std::mt19937_64 rng(21);
  for (int s = 0; s < 50; ++s) {
    Mat u = random_unitary(rng, 2);
    EXPECT_LT(phase_distance(qk::circuit_unitary(qk::zyz_circuit(u, 0), 1), u), 1e-10);
  }
}

TEST(Synthesis, KakOnStructuredGates) {
  std::vector<Mat> gates = {cnot(0, 1, 2), Mat(on_qubit(pauli('Z'), 1, 2, {0})), Mat::Identity(4, 4),
                            tensor(hadamard(), rx(0.4))};
  Mat swap = Mat::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  gates.push_back(swap);
  std::vector<std::size_t> max_cx = {1, 1, 0, 0, 3};
  for (std::size_t g = 0; g < gates.size(); ++g) {
    auto circ = qk::kak(gates[g], 0, 1);
    EXPECT_LT(phase_distance(qk::circuit_unitary(circ, 2), gates[g]), 1e-8) << g;
    EXPECT_LE(qk::count_gate(circ, "CX"), max_cx[g]) << g;
  }
}

TEST(Synthesis, TwoLevelOnRandomThreeQubitUnitaries) {
  std::mt19937_64 rng(22);
  for (int s = 0; s < 5; ++s) {
    Mat u = random_unitary(rng, 8);
    auto circ = qk::two_level(u, {0, 1, 2});
    EXPECT_LT(phase_distance(qk::circuit_unitary(circ, 3), u), 1e-8);
  }
}

TEST(Synthesis, ControlledUnitary) {
  std::mt19937_64 rng(23);
  Mat v = random_unitary(rng, 2);
  auto circ = qk::controlled_unitary(v, {0, 2}, 1);
  EXPECT_LT(phase_distance(qk::circuit_unitary(circ, 3), on_qubit(v, 1, 3, {0, 2})), 1e-10);
}

TEST(Synthesis, RejectsBadInput) {
  Mat almost = Mat::Identity(4, 4);
  almost(0, 0) = 1.0 + 1e-6;
  EXPECT_EQ(error_of([&] { qk::synthesize(almost, {0, 1}); }), qk::ErrorCode::NonUnitaryInput);
  EXPECT_EQ(error_of([&] { qk::synthesize(Mat::Identity(4, 4), {0, 1, 2}); }), qk::ErrorCode::DimensionMismatch);
  EXPECT_FALSE(qk::parse_synthesis_method("qfast"));
  EXPECT_EQ(qk::parse_synthesis_method("two-level"), qk::SynthesisMethod::TwoLevel);
}

TEST(Transforms, ControlledKeepsComputeUncontrolled) {
  auto jit = load_kernels("ucc1.qk");
  auto c = qk::extract_composite(jit->registry(), *jit->registry().get("ucc1"),
                                 {{"q", qk::QRegArg{4}}, {"x", 0.8}});
  auto smart = qk::flatten(qk::controlled(c, {4}));
  auto naive = qk::flatten(qk::controlled_naive(c, {4}));
  EXPECT_EQ(smart.size(), naive.size());
  // Single-control forms are canonicalized (Rz -> CRz), so look for qubit 4 anywhere.
  auto uses_control = [](const qk::Instruction& i) {
    return std::count(i.targets.begin(), i.targets.end(), 4) + std::count(i.controls.begin(), i.controls.end(), 4) > 0;
  };
  std::size_t smart_ctrl = 0, naive_ctrl = 0;
  for (const auto& i : smart) smart_ctrl += uses_control(i) ? 1 : 0;
  for (const auto& i : naive) naive_ctrl += uses_control(i) ? 1 : 0;
  EXPECT_EQ(smart_ctrl, 1u);
  EXPECT_EQ(naive_ctrl, naive.size());
  EXPECT_LT(phase_distance(qk::circuit_unitary(smart, 5), qk::circuit_unitary(naive, 5)), 1e-10);
}

TEST(Transforms, PeepholeCancelsAndMerges) {
  std::vector<qk::Instruction> in = {qk::make_gate("H", {0}), qk::make_gate("H", {0}),
                                     qk::make_gate("Rz", {1}, {0.2}), qk::make_gate("Rz", {1}, {0.3}),
                                     qk::make_gate("S", {2}), qk::make_gate("Sdg", {2})};
  auto out = qk::peephole_optimize(in);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].name, "Rz");
  EXPECT_NEAR(out[0].params[0], 0.5, 1e-15);
}

TEST(NelderMead, QuadraticMinimum) {
  auto r = qk::nelder_mead([](const std::vector<double>& x) { return (x[0] - 1) * (x[0] - 1); }, {0.0},
                           {.max_evaluations = 200, .initial_step = 0.5, .ftol = 1e-14, .xtol = 1e-9});
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_LE(r.evaluations, 200);
}

TEST(NelderMead, RosenbrockAndBudget) {
  auto rosen = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  auto r = qk::nelder_mead(rosen, {-1.2, 1.0}, {.max_evaluations = 2000, .initial_step = 0.5, .ftol = 1e-16, .xtol = 1e-10});
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  int calls = 0;
  auto counted = [&](const std::vector<double>& x) {
    ++calls;
    return rosen(x);
  };
  auto capped = qk::nelder_mead(counted, {-1.2, 1.0}, {.max_evaluations = 17});
  EXPECT_EQ(calls, capped.evaluations);
  EXPECT_LE(calls, 17);
}

TEST(ObjectiveFunction, ListParameterTakesEveryEntry) {
  auto jit = std::make_unique<qk::QJIT>(qk::QJITOptions{std::nullopt, false});
  jit->compile_file("def a(q : qreg, x : List[float]):\n    Ry(q[0], x[0])\n    Ry(q[1], x[1])\n");
  qk::ObjectiveFunction f(jit->registry(), jit->registry().get("a"), qk::parse_pauli("Z0 + Z1"), 2);
  EXPECT_EQ(f.dimension(), -1);
  EXPECT_NEAR(f({M_PI, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(f({M_PI, M_PI}), -2.0, 1e-12);
  EXPECT_EQ(f.evaluations(), 2);
}
