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

#include <regex>

#include "oracle.hpp"
#include "qk/args.hpp"
#include "qk/error.hpp"
#include "qk/results.hpp"
#include "qk/runtime.hpp"
#include "qk/statevector.hpp"

using namespace oracle;

namespace {

std::unique_ptr<qk::QJIT> compile(const std::string& src) {
  auto jit = std::make_unique<qk::QJIT>(qk::QJITOptions{std::nullopt, false});
  jit->compile_file(src);
  return jit;
}

qk::ExecOptions exact() {
  qk::ExecOptions o;
  o.shots = 0;
  return o;
}

qk::ExecOptions ftqc(std::int64_t shots = 0) {
  qk::ExecOptions o;
  o.mode = qk::ExecMode::Ftqc;
  o.backend = "ftqc";
  o.shots = shots;
  return o;
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

TEST(Execute, BellCountsWithinFourSigma) {
  auto jit = load_kernels("bell.qk");
  qk::ExecOptions o;
  o.shots = 8192;
  o.seed = 31;
  auto q = qk::execute(jit->registry(), *jit->registry().get("bell"), {{"q", qk::QRegArg{2}}}, o);
  for (const auto& [k, v] : q.results.counts) EXPECT_TRUE(k == "00" || k == "11") << k;
  const double sigma = std::sqrt(8192 * 0.25);
  EXPECT_LE(std::abs(q.results.counts["00"] - 4096.0), 4 * sigma);
  EXPECT_EQ(q.results.counts["00"] + q.results.counts["11"], 8192);
}

TEST(Execute, SeedDeterminism) {
  auto jit = load_kernels("bell.qk");
  qk::ExecOptions o;
  o.shots = 500;
  o.seed = 7;
  const auto& k = *jit->registry().get("bell");
  auto a = qk::execute(jit->registry(), k, {{"q", qk::QRegArg{2}}}, o).results.counts;
  auto b = qk::execute(jit->registry(), k, {{"q", qk::QRegArg{2}}}, o).results.counts;
  EXPECT_EQ(a, b);
}

TEST(Execute, EmptyKernel) {
  auto jit = compile("def empty(q : qreg):\n    pass\n");
  auto q = qk::execute(jit->registry(), *jit->registry().get("empty"), {{"q", qk::QRegArg{2}}});
  EXPECT_TRUE(q.results.counts.empty());
  auto amps = qk::execute(jit->registry(), *jit->registry().get("empty"), {{"q", qk::QRegArg{2}}}, exact())
                  .results.amplitudes;
  ASSERT_EQ(amps.size(), 4u);
  EXPECT_EQ(amps[0], qk::Complex(1.0, 0.0));
}

TEST(Execute, UnmeasuredQubitsPrintZero) {
  auto jit = compile("def k(q : qreg):\n    X(q[1])\n    X(q[2])\n    Measure(q[1])\n");
  qk::ExecOptions o;
  o.shots = 10;
  auto counts = qk::execute(jit->registry(), *jit->registry().get("k"), {{"q", qk::QRegArg{3}}}, o)
                    .results.counts;
  EXPECT_EQ(counts, (std::map<std::string, std::int64_t>{{"010", 10}}));
}

TEST(Execute, DynamicBranchNeedsFtqc) {
  auto jit = load_kernels("qec.qk");
  qk::ArgPack pack{{"q", qk::QRegArg{4}}, {"logical", 0}, {"err", 1}};
  const auto& k = *jit->registry().get("qec_test");
  EXPECT_EQ(error_of([&] { qk::execute(jit->registry(), k, pack); }),
            qk::ErrorCode::DynamicControlFlowInCircuitMode);
  qk::ExecOptions wrong = ftqc();
  wrong.backend = "qpp-like";
  EXPECT_EQ(error_of([&] { qk::execute(jit->registry(), k, pack, wrong); }),
            qk::ErrorCode::BackendCapabilityError);
  qk::ExecOptions unknown;
  unknown.backend = "nope";
  EXPECT_EQ(error_of([&] { qk::execute(jit->registry(), k, pack, unknown); }),
            qk::ErrorCode::BackendNotFound);
}

TEST(Execute, ByReferenceResultsComeBack) {
  auto jit = compile(
      "def count_ones(q : qreg, total : IntRef):\n"
      "    X(q[0])\n"
      "    X(q[2])\n"
      "    total = 0\n"
      "    for i in range(q.size()):\n"
      "        if Measure(q[i]):\n"
      "            total = total + 1\n");
  qk::RefArg total;
  qk::ArgPack pack{{"q", qk::QRegArg{3}}, {"total", total}};
  auto q = qk::execute(jit->registry(), *jit->registry().get("count_ones"), pack, ftqc(1));
  EXPECT_EQ(std::get<std::int64_t>(*total.cell), 2);
  EXPECT_EQ(std::get<std::int64_t>(q.results.byref.at("total")), 2);
  EXPECT_EQ(q.results.counts, (std::map<std::string, std::int64_t>{{"101", 1}}));
}

TEST(Execute, KernelArgumentMustMatchSignature) {
  auto jit = compile(
      "def one(q : qreg, x : float):\n    Rx(q[0], x)\n\n"
      "def apply(q : qreg, f : KernelSignature(qreg)):\n    f(q)\n");
  const auto& k = *jit->registry().get("apply");
  EXPECT_EQ(error_of([&] {
              qk::execute(jit->registry(), k, {{"q", qk::QRegArg{1}}, {"f", qk::KernelRef{"one"}}});
            }),
            qk::ErrorCode::TypeMismatch);
  EXPECT_EQ(error_of([&] {
              qk::execute(jit->registry(), k, {{"q", qk::QRegArg{1}}, {"f", qk::KernelRef{"gone"}}});
            }),
            qk::ErrorCode::UnboundKernelReference);
  EXPECT_EQ(error_of([&] { qk::execute(jit->registry(), k, {{"q", qk::QRegArg{1}}}); }),
            qk::ErrorCode::ArityError);
}

TEST(Observe, BellStabilizerAndIdentity) {
  auto jit = compile("def bell2(q : qreg):\n    H(q[0])\n    CX(q[0], q[1])\n");
  const auto& k = *jit->registry().get("bell2");
  qk::ArgPack pack{{"q", qk::QRegArg{2}}};
  EXPECT_NEAR(qk::observe(jit->registry(), k, qk::parse_pauli("Z0 * Z1"), pack, exact()), 1.0, 1e-12);
  EXPECT_NEAR(qk::observe(jit->registry(), k, qk::parse_pauli("X0 * X1"), pack, exact()), 1.0, 1e-12);
  EXPECT_NEAR(qk::observe(jit->registry(), k, qk::parse_pauli("Y0 * Y1"), pack, exact()), -1.0, 1e-12);
  EXPECT_NEAR(qk::observe(jit->registry(), k, qk::parse_pauli("5.907"), pack, exact()), 5.907, 1e-12);
}

TEST(Observe, MatchesDenseOracleOnDeuteron) {
  auto jit = load_kernels("deuteron.qk");
  auto op = qk::parse_pauli(read_file(source_path("kernels/deuteron.pauli")));
  Mat h = -2.1433 * pauli_string("XX") - 2.1433 * pauli_string("YY") + 0.21829 * pauli_string("ZI") -
          6.125 * pauli_string("IZ") + 5.907 * Mat::Identity(4, 4);
  for (double t : {-1.0, 0.0, 0.3, 0.594, 2.0}) {
    Vec psi = Vec::Zero(4);
    psi(0) = 1.0;
    psi = cnot(1, 0, 2) * on_qubit(ry(t), 1, 2) * on_qubit(pauli('X'), 0, 2) * psi;
    double want = (psi.adjoint() * h * psi)(0, 0).real();
    double got = qk::observe(jit->registry(), *jit->registry().get("ansatz"), op,
                             {{"q", qk::QRegArg{2}}, {"t0", t}}, exact());
    EXPECT_NEAR(got, want, 1e-10) << t;
  }
}

TEST(Observe, SampledEstimateConverges) {
  auto jit = load_kernels("deuteron.qk");
  auto op = qk::parse_pauli(read_file(source_path("kernels/deuteron.pauli")));
  qk::ArgPack pack{{"q", qk::QRegArg{2}}, {"t0", 0.594}};
  const auto& k = *jit->registry().get("ansatz");
  double want = qk::observe(jit->registry(), k, op, pack, exact());
  qk::ExecOptions o;
  o.shots = 200000;
  o.seed = 3;
  EXPECT_NEAR(qk::observe(jit->registry(), k, op, pack, o), want, 0.1);
}

TEST(Observe, Errors) {
  auto jit = load_kernels("bell.qk");
  const auto& k = *jit->registry().get("bell");
  qk::ArgPack pack{{"q", qk::QRegArg{2}}};
  EXPECT_EQ(error_of([&] { qk::observe(jit->registry(), k, qk::parse_pauli("Z0"), pack, exact()); }),
            qk::ErrorCode::NonUnitarySubcircuit);
  auto jit2 = compile("def h(q : qreg):\n    H(q[0])\n");
  qk::PauliOperator bad;
  bad.add_term({{0, 'Z'}}, qk::Complex(0, 1));
  EXPECT_EQ(error_of([&] {
              qk::observe(jit2->registry(), *jit2->registry().get("h"), bad, {{"q", qk::QRegArg{1}}},
                          exact());
            }),
            qk::ErrorCode::NonHermitianObservable);
}

TEST(Utilities, ExtractComposite) {
  auto jit = load_kernels("bell.qk");
  auto c = qk::extract_composite(jit->registry(), *jit->registry().get("bell"), {{"q", qk::QRegArg{2}}});
  EXPECT_EQ(qk::count_instructions(c), 4u);
  EXPECT_EQ(c.name, "bell");
}

TEST(Utilities, SynthesisLeavesNoPlaceholder) {
  auto jit = load_kernels("ccnot.qk");
  auto c = qk::extract_composite(jit->registry(), *jit->registry().get("ccnot"), {{"q", qk::QRegArg{3}}});
  for (const auto& i : qk::flatten(c)) {
    EXPECT_TRUE(i.name == "Rz" || i.name == "Ry" || i.name == "CX" || i.name == "X" ||
                i.name == "Measure")
        << i.name;
  }
}

TEST(Utilities, AsUnitaryMatrix) {
  auto jit = compile(
      "def empty(q : qreg):\n    pass\n\n"
      "def bell2(q : qreg):\n    H(q[0])\n    CX(q[0], q[1])\n");
  Mat e = qk::as_unitary_matrix(jit->registry(), *jit->registry().get("empty"), {{"q", qk::QRegArg{1}}});
  EXPECT_LT((e - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  Mat b = qk::as_unitary_matrix(jit->registry(), *jit->registry().get("bell2"), {{"q", qk::QRegArg{2}}});
  Mat want = cnot(0, 1, 2) * tensor(hadamard(), Mat::Identity(2, 2));
  EXPECT_LT((b - want).cwiseAbs().maxCoeff(), 1e-12);
  auto bell = load_kernels("bell.qk");
  EXPECT_EQ(error_of([&] {
              qk::as_unitary_matrix(bell->registry(), *bell->registry().get("bell"), {{"q", qk::QRegArg{2}}});
            }),
            qk::ErrorCode::NonUnitarySubcircuit);
}

TEST(OpenQasm, BellAndEmpty) {
  auto jit = load_kernels("bell.qk");
  auto text = qk::openqasm(jit->registry(), *jit->registry().get("bell"), {{"q", qk::QRegArg{2}}});
  EXPECT_EQ(text.rfind("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n", 0), 0u);
  EXPECT_NE(text.find("h q[0];"), std::string::npos);
  EXPECT_NE(text.find("cx q[0],q[1];"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  auto empty = compile("def e(q : qreg):\n    pass\n");
  EXPECT_EQ(qk::openqasm(empty->registry(), *empty->registry().get("e"), {{"q", qk::QRegArg{1}}}),
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n");
}

TEST(OpenQasm, GroverExportPassesGrammarCheck) {
  auto jit = load_kernels("grover.qk");
  auto text = qk::openqasm(jit->registry(), *jit->registry().get("run_grover"),
                           {{"q", qk::QRegArg{3}}, {"oracle_var", qk::KernelRef{"cz_oracle"}}, {"iterations", 1}});
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "OPENQASM 2.0;");
  std::getline(in, line);
  EXPECT_EQ(line, "include \"qelib1.inc\";");
  const std::regex reg_decl(R"((qreg|creg) [a-z]\[\d+\];)");
  const std::regex gate(R"([a-z][a-z0-9]*(\((-?[0-9.eE+-]+)(,-?[0-9.eE+-]+)*\))? q\[\d+\](,q\[\d+\])*;)");
  const std::regex measure(R"(measure q\[\d+\] -> c\[\d+\];)");
  const std::set<std::string> qelib{"u3", "u2", "u1", "cx", "id", "x", "y", "z", "h", "s", "sdg", "t",
                                    "tdg", "rx", "ry", "rz", "cz", "cy", "ch", "ccx", "crz", "cu1",
                                    "cu3", "swap", "measure", "reset"};
  int statements = 0;
  while (std::getline(in, line)) {
    ++statements;
    bool ok = std::regex_match(line, reg_decl) || std::regex_match(line, measure) ||
              std::regex_match(line, gate);
    EXPECT_TRUE(ok) << line;
    std::string name = line.substr(0, line.find_first_of(" ("));
    if (!std::regex_match(line, reg_decl)) EXPECT_TRUE(qelib.count(name)) << line;
  }
  EXPECT_GT(statements, 10);
}

TEST(Args, JsonRoundTrip) {
  auto pack = qk::argpack_from_json(
      R"({"q": {"size": 3}, "x": 0.5, "n": 2, "flag": true, "f": {"kernel": "cz_oracle"},
          "ops": [{"pauli": "X0 * Y1"}], "r": {"ref": 4}, "thetas": [0.1, 0.2]})");
  EXPECT_EQ(pack.size(), 8u);
  EXPECT_EQ(std::get<qk::QRegArg>(pack.find("q")->v).size, 3);
  EXPECT_EQ(std::get<double>(pack.find("x")->v), 0.5);
  EXPECT_EQ(std::get<std::int64_t>(pack.find("n")->v), 2);
  EXPECT_EQ(std::get<qk::KernelRef>(pack.find("f")->v).name, "cz_oracle");
  auto again = qk::argpack_from_json(qk::argpack_to_json(pack));
  EXPECT_EQ(qk::argpack_to_json(again), qk::argpack_to_json(pack));
  EXPECT_THROW(qk::argpack_from_json("[1, 2]"), qk::Error);
}

TEST(Args, BackendConfigFile) {
  auto cfg = qk::parse_backend_config("# comment\nshots: 10\n\nnoise : none\n");
  EXPECT_EQ(cfg.at("shots"), "10");
  EXPECT_EQ(cfg.at("noise"), "none");
  EXPECT_EQ(error_of([] { qk::parse_backend_config("no colon here\n"); }), qk::ErrorCode::IoError);
}

TEST(Results, JsonRoundTrip) {
  qk::ResultsDocument doc;
  doc.kernel = "bell";
  doc.backend = "qpp-like";
  doc.mode = "circuit";
  doc.seed = 7;
  doc.shots = 100;
  doc.results.counts = {{"00", 52}, {"11", 48}};
  doc.results.expectations = {{"H", -1.5}};
  doc.results.byref = {{"total", std::int64_t{2}}, {"flag", true}, {"x", 0.25}};
  doc.results.log = {"Syndrome value= 0"};
  doc.results.amplitudes = {{1.0, 0.0}, {0.0, -0.5}};
  doc.timing = {1, 2, 3};
  auto text = qk::results_to_json(doc);
  auto back = qk::results_from_json(text);
  EXPECT_EQ(back.results.counts, doc.results.counts);
  EXPECT_EQ(back.results.byref, doc.results.byref);
  EXPECT_EQ(back.results.amplitudes, doc.results.amplitudes);
  EXPECT_EQ(back.timing.execute_ns, 3);
  EXPECT_EQ(qk::results_to_json(back), text);
  EXPECT_EQ(qk::results_to_json(doc, false).find("timing"), std::string::npos);
}

TEST(StateVector, BasisLabelPutsQubitZeroFirst) {
  EXPECT_EQ(qk::basis_label(1, 3), "001");
  EXPECT_EQ(qk::basis_label(4, 3), "100");
  qk::StateVector sv(3);
  sv.apply(qk::make_gate("X", {0}));
  EXPECT_EQ(sv.amplitudes()[4], qk::Complex(1.0, 0.0));
}

TEST(StateVector, GatesMatchOracleMatrices) {
  struct Case {
    qk::Instruction instr;
    Mat want;
  };
  std::vector<Case> cases = {
      {qk::make_gate("H", {1}), on_qubit(hadamard(), 1, 3)},
      {qk::make_gate("Rx", {2}, {0.3}), on_qubit(rx(0.3), 2, 3)},
      {qk::make_gate("Ry", {0}, {-1.1}), on_qubit(ry(-1.1), 0, 3)},
      {qk::make_gate("Rz", {1}, {2.2}), on_qubit(rz(2.2), 1, 3)},
      {qk::make_gate("CX", {2, 0}), cnot(2, 0, 3)},
      {qk::make_gate("CZ", {0, 1}), on_qubit(pauli('Z'), 1, 3, {0})},
  };
  qk::Instruction ccx = qk::make_gate("X", {2});
  ccx.controls = {0, 1};
  cases.push_back({ccx, on_qubit(pauli('X'), 2, 3, {0, 1})});
  for (const auto& c : cases) {
    Mat got = qk::circuit_unitary({c.instr}, 3);
    EXPECT_LT((got - c.want).cwiseAbs().maxCoeff(), 1e-12) << qk::dump_instruction(c.instr);
  }
}
