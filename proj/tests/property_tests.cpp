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

#include <random>

#include "oracle.hpp"
#include "qk/fermion.hpp"
#include "qk/gates.hpp"
#include "qk/runtime.hpp"
#include "qk/statevector.hpp"
#include "qk/transforms.hpp"

using namespace oracle;

namespace {

const std::vector<std::string> kGates = {"H",  "X",  "Y",  "Z",    "S",      "Sdg",  "T",
                                         "Tdg", "Rx", "Ry", "Rz",   "CX",     "CY",   "CZ",
                                         "Swap", "CRz", "CPhase", "fSim"};

qk::Instruction random_gate(std::mt19937_64& rng, int n, bool allow_controls) {
  std::uniform_int_distribution<std::size_t> pick(0, kGates.size() - 1);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  const auto* info = qk::find_gate(kGates[pick(rng)]);
  std::vector<int> qubits(static_cast<std::size_t>(n));
  std::iota(qubits.begin(), qubits.end(), 0);
  std::shuffle(qubits.begin(), qubits.end(), rng);
  qk::Instruction i;
  i.name = std::string(info->name);
  i.targets.assign(qubits.begin(), qubits.begin() + info->num_targets);
  for (int p = 0; p < info->num_params; ++p) i.params.push_back(angle(rng));
  if (allow_controls && info->num_targets + 1 <= n && rng() % 4 == 0) {
    i.controls.push_back(qubits[static_cast<std::size_t>(info->num_targets)]);
  }
  return i;
}

qk::Composite random_circuit(std::mt19937_64& rng, int n, int length, bool allow_controls = true) {
  qk::Composite c{"random", {}, qk::Region::None};
  for (int k = 0; k < length; ++k) c.children.emplace_back(random_gate(rng, n, allow_controls));
  return c;
}

Mat dense(const qk::PauliOperator& op, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [word, coeff] : op.terms()) {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (const auto& [q, p] : word) s[static_cast<std::size_t>(q)] = p;
    m += coeff * pauli_string(s);
  }
  return m;
}

}  // namespace

TEST(AdjointInvolution, RandomCircuits) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = random_circuit(rng, 3, 12);
    EXPECT_EQ(qk::adjoint(qk::adjoint(c)), c);
    Mat u = qk::circuit_unitary(qk::flatten(c), 3);
    Mat v = qk::circuit_unitary(qk::flatten(qk::adjoint(c)), 3);
    EXPECT_LT((v - u.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(AdjointInvolution, ComputeActionRegions) {
  auto jit = load_kernels("ucc1.qk");
  auto c = qk::extract_composite(jit->registry(), *jit->registry().get("ucc1"),
                                 {{"q", qk::QRegArg{4}}, {"x", 0.3}});
  EXPECT_EQ(qk::adjoint(qk::adjoint(c)), c);
}

TEST(PeepholeUnitaryPreservation, RandomCircuitsWithRedundancy) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_circuit(rng, 3, 10);
    // Seed cancellable pairs and mergeable rotations.
    qk::Composite padded{"padded", {}, qk::Region::None};
    for (const auto& child : c.children) {
      const auto& i = *child.instruction();
      padded.children.push_back(i);
      if (rng() % 3 == 0) {
        padded.children.push_back(qk::adjoint_instruction(i));
        padded.children.push_back(i);
      }
      if (rng() % 3 == 0) {
        padded.children.push_back(qk::make_gate("Rz", {i.targets[0]}, {0.25}));
        padded.children.push_back(qk::make_gate("Rz", {i.targets[0]}, {-0.5}));
      }
    }
    auto before = qk::flatten(padded);
    auto after = qk::peephole_optimize(before);
    EXPECT_LE(after.size(), before.size());
    EXPECT_LT((qk::circuit_unitary(after, 3) - qk::circuit_unitary(before, 3)).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(JordanWignerAnticommutation, UpToFourModes) {
  for (int n = 1; n <= 4; ++n) {
    std::vector<Mat> a, ad;
    for (int p = 0; p < n; ++p) {
      a.push_back(dense(qk::jordan_wigner(qk::FermionOperator(std::to_string(p), 1.0)), n));
      ad.push_back(dense(qk::jordan_wigner(qk::FermionOperator(std::to_string(p) + "^", 1.0)), n));
    }
    const Mat id = Mat::Identity(a[0].rows(), a[0].cols());
    for (int p = 0; p < n; ++p) {
      EXPECT_LT((ad[static_cast<std::size_t>(p)] - a[static_cast<std::size_t>(p)].adjoint()).cwiseAbs().maxCoeff(), 1e-12);
      for (int q = 0; q < n; ++q) {
        const Mat& ap = a[static_cast<std::size_t>(p)];
        const Mat& aq = a[static_cast<std::size_t>(q)];
        const Mat& adq = ad[static_cast<std::size_t>(q)];
        Mat mixed = ap * adq + adq * ap;
        Mat want = p == q ? id : Mat::Zero(id.rows(), id.cols());
        EXPECT_LT((mixed - want).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " p=" << p << " q=" << q;
        EXPECT_LT((ap * aq + aq * ap).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(ModeEquivalence, UnitaryKernelsGiveSameState) {
  struct Case {
    std::string file, kernel;
    qk::ArgPack pack;
  };
  std::vector<Case> cases = {
      {"deuteron.qk", "ansatz", {{"q", qk::QRegArg{2}}, {"t0", 0.4}}},
      {"ucc1.qk", "kernel", {{"q", qk::QRegArg{5}}, {"d", 1.234}}},
      {"dag.qk", "d", {{"q", qk::QRegArg{2}}}},
      {"ccnot.qk", "ccnot_unitary", {{"q", qk::QRegArg{3}}}},
  };
  for (const auto& c : cases) {
    auto jit = load_kernels(c.file);
    const auto& k = *jit->registry().get(c.kernel);
    qk::ExecOptions circuit;
    circuit.shots = 0;
    qk::ExecOptions ftqc = circuit;
    ftqc.mode = qk::ExecMode::Ftqc;
    ftqc.backend = "ftqc";
    auto a = qk::execute(jit->registry(), k, c.pack, circuit).results.amplitudes;
    auto b = qk::execute(jit->registry(), k, c.pack, ftqc).results.amplitudes;
    ASSERT_EQ(a.size(), b.size()) << c.kernel;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-10) << c.kernel;
  }
}

TEST(ModeEquivalence, MeasuredKernelsSampleSameDistribution) {
  struct Case {
    std::string file, kernel;
    qk::ArgPack pack;
    int n;
  };
  std::vector<Case> cases = {
      {"bell.qk", "bell", {{"q", qk::QRegArg{2}}}, 2},
      {"grover.qk", "run_grover",
       {{"q", qk::QRegArg{3}}, {"oracle_var", qk::KernelRef{"cz_oracle"}}, {"iterations", 1}}, 3},
  };
  const std::int64_t shots = 4000;
  for (const auto& c : cases) {
    auto jit = load_kernels(c.file);
    const auto& k = *jit->registry().get(c.kernel);
    qk::ExecOptions exact;
    exact.shots = 0;
    auto amps = qk::execute(jit->registry(), k, c.pack, exact).results.amplitudes;
    qk::ExecOptions ftqc;
    ftqc.mode = qk::ExecMode::Ftqc;
    ftqc.backend = "ftqc";
    ftqc.shots = shots;
    ftqc.seed = 5;
    auto counts = qk::execute(jit->registry(), k, c.pack, ftqc).results.counts;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      double p = std::norm(amps[i]);
      std::string key = qk::basis_label(i, c.n);
      double seen = counts.count(key) ? static_cast<double>(counts.at(key)) : 0.0;
      total += static_cast<std::int64_t>(seen);
      double sigma = std::sqrt(static_cast<double>(shots) * p * (1 - p));
      EXPECT_LE(std::abs(seen - p * static_cast<double>(shots)), 4 * sigma + 1e-9) << c.kernel << " " << key;
    }
    EXPECT_EQ(total, shots);
  }
}

TEST(NormPreservation, EveryGateKeepsUnitNorm) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    qk::StateVector sv(4);
    auto c = random_circuit(rng, 4, 40);
    for (const auto& i : qk::flatten(c)) {
      sv.apply(i);
      ASSERT_NEAR(sv.norm(), 1.0, 1e-10) << qk::dump_instruction(i);
    }
  }
}

TEST(NormPreservation, MeasureAndResetRenormalize) {
  std::mt19937_64 rng(14);
  qk::Rng sim(3);
  for (int trial = 0; trial < 20; ++trial) {
    qk::StateVector sv(3);
    for (const auto& i : qk::flatten(random_circuit(rng, 3, 15))) sv.apply(i);
    int q = static_cast<int>(rng() % 3);
    bool outcome = sv.measure(q, sim);
    EXPECT_NEAR(sv.norm(), 1.0, 1e-10);
    EXPECT_NEAR(sv.probability_one(q), outcome ? 1.0 : 0.0, 1e-10);
    sv.reset(q, sim);
    EXPECT_NEAR(sv.norm(), 1.0, 1e-10);
    EXPECT_NEAR(sv.probability_one(q), 0.0, 1e-10);
  }
}
