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

// One line per acceptance criterion. Usage: qk_acceptance <qk-cli> <property-test-binary>

#include <unistd.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>

#include "oracle.hpp"
#include "qk/error.hpp"
#include "qk/pauli.hpp"
#include "qk/runtime.hpp"
#include "qk/statevector.hpp"
#include "qk/synthesis.hpp"
#include "qk/trotter.hpp"
#include "qk/vqe.hpp"

namespace fs = std::filesystem;
using namespace oracle;

namespace {

std::string g_cli;
std::string g_property_bin;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string run_capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  *status = ::pclose(p);
  return out;
}

fs::path temp_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("qk-acceptance-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Deuteron Hamiltonian as a dense 4x4 matrix, qubit 0 leftmost.
Mat deuteron_matrix() {
  Mat h = -2.1433 * pauli_string("XX") - 2.1433 * pauli_string("YY") +
          0.21829 * pauli_string("ZI") - 6.125 * pauli_string("IZ") +
          5.907 * Mat::Identity(4, 4);
  return h;
}

double deuteron_energy_oracle(double t0) {
  Vec psi = Vec::Zero(4);
  psi(0) = 1.0;
  psi = on_qubit(pauli('X'), 0, 2) * psi;
  psi = on_qubit(ry(t0), 1, 2) * psi;
  psi = cnot(1, 0, 2) * psi;
  return (psi.adjoint() * deuteron_matrix() * psi)(0, 0).real();
}

Outcome vqe_deuteron() {
  Outcome o;
  auto quad = qk::nelder_mead([](const std::vector<double>& x) { return (x[0] - 1) * (x[0] - 1); },
                              {0.0}, {.max_evaluations = 200, .initial_step = 0.5, .ftol = 1e-14, .xtol = 1e-9});
  o.require(std::abs(quad.x[0] - 1.0) < 1e-6, "(x-1)^2 minimum missed: x=" + std::to_string(quad.x[0]));

  double scan_min = 1e9;
  for (double t = -M_PI; t <= M_PI; t += 1e-4) scan_min = std::min(scan_min, deuteron_energy_oracle(t));

  auto start = std::chrono::steady_clock::now();
  auto jit = load_kernels("deuteron.qk");
  auto op = qk::parse_pauli(read_file(source_path("kernels/deuteron.pauli")));
  qk::ObjectiveFunction obj(jit->registry(), jit->registry().get("ansatz"), op, 2);
  auto res = qk::nelder_mead(std::ref(obj), {0.0}, {.max_evaluations = 100});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  o.require(obj.evaluations() <= 100, "too many evaluations");
  o.require(res.fx <= -1.7488, "energy " + std::to_string(res.fx) + " above -1.7488");
  o.require(std::abs(res.fx - -1.74886) <= 1e-3, "energy off target");
  o.require(std::abs(res.fx - scan_min) < 1e-6, "energy differs from the dense scan minimum");
  o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "E=%.6f after %d evaluations (scan min %.6f), %.3f s", res.fx,
                  obj.evaluations(), scan_min, secs);
    o.detail = buf;
  }
  return o;
}

Mat haar_su4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat z(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = C(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  C det = q.determinant();
  return q / std::pow(det, 0.25);
}

Outcome synthesis() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();

  Mat ccnot = Mat::Identity(8, 8);
  ccnot(6, 6) = 0.0;
  ccnot(7, 7) = 0.0;
  ccnot(6, 7) = 1.0;
  ccnot(7, 6) = 1.0;
  auto jit = load_kernels("ccnot.qk");
  qk::ArgPack pack{{"q", qk::QRegArg{3}}};
  Mat u = qk::as_unitary_matrix(jit->registry(), *jit->registry().get("ccnot_unitary"), pack);
  double ccnot_err = phase_distance(u, ccnot);
  o.require(ccnot_err < 1e-6, "CCNOT error " + std::to_string(ccnot_err));

  std::mt19937_64 rng(2026);
  double worst = 0.0;
  std::size_t max_cx = 0;
  for (int s = 0; s < 200; ++s) {
    Mat target = haar_su4(rng);
    auto gates = qk::kak(target, 0, 1);
    Mat got = qk::circuit_unitary(gates, 2);
    worst = std::max(worst, phase_distance(got, target));
    max_cx = std::max(max_cx, qk::count_gate(gates, "CX"));
  }
  o.require(worst < 1e-8, "kak error " + std::to_string(worst));
  o.require(max_cx <= 3, "kak used " + std::to_string(max_cx) + " CX");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "ccnot err %.2e; kak worst %.2e, max %zu CX; %.2f s", ccnot_err,
                  worst, max_cx, secs);
    o.detail = buf;
  }
  return o;
}

Mat instruction_oracle(const qk::Instruction& i, int n, std::vector<int> controls) {
  auto one = [&](const Mat& m, int q) { return on_qubit(m, q, n, controls); };
  if (i.name == "H") return one(hadamard(), i.targets[0]);
  if (i.name == "X") return one(pauli('X'), i.targets[0]);
  if (i.name == "Rx") return one(rx(i.params[0]), i.targets[0]);
  if (i.name == "Ry") return one(ry(i.params[0]), i.targets[0]);
  if (i.name == "Rz") return one(rz(i.params[0]), i.targets[0]);
  if (i.name == "CX") {
    controls.push_back(i.targets[0]);
    return on_qubit(pauli('X'), i.targets[1], n, controls);
  }
  throw std::runtime_error("no oracle for " + i.name);
}

Outcome compute_action() {
  Outcome o;
  auto jit = load_kernels("ucc1.qk");
  const auto& reg = jit->registry();
  const double d = 1.234;
  auto instrs = qk::flatten(
      qk::extract_composite(reg, *reg.get("kernel"), {{"q", qk::QRegArg{5}}, {"d", d}}));
  std::size_t on_control = 0;
  for (const auto& i : instrs) {
    bool touches = std::count(i.targets.begin(), i.targets.end(), 4) ||
                   std::count(i.controls.begin(), i.controls.end(), 4);
    on_control += touches ? 1 : 0;
  }
  o.require(instrs.size() == 15, std::to_string(instrs.size()) + " instructions");
  o.require(on_control == 1, std::to_string(on_control) + " controlled instructions");

  auto body = qk::flatten(
      qk::extract_composite(reg, *reg.get("ucc1"), {{"q", qk::QRegArg{4}}, {"x", d}}));
  Mat naive = Mat::Identity(32, 32);
  for (const auto& i : body) naive = instruction_oracle(i, 5, {4}) * naive;
  Mat got = qk::as_unitary_matrix(reg, *reg.get("kernel"), {{"q", qk::QRegArg{5}}, {"d", d}});
  double err = phase_distance(got, naive);
  o.require(err < 1e-10, "unitary differs from naive control by " + std::to_string(err));
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "15 instructions, 1 controlled, naive 32x32 diff %.2e", err);
    o.detail = buf;
  }
  return o;
}

Outcome cache() {
  Outcome o;
  fs::path dir = temp_dir("cache");
  const std::string bell = read_file(source_path("kernels/bell.qk"));
  qk::QJITOptions opts{dir, true};

  qk::QJIT first(opts);
  auto cold = first.jit_compile(bell);
  o.require(cold.provenance == qk::Provenance::Miss, "cold compile was not a miss");
  auto before = first.counters();
  auto warm = first.jit_compile(bell);
  auto after = first.counters();
  o.require(warm.provenance == qk::Provenance::MemoryHit, "recompile was not a memory hit");
  o.require(after.lower == before.lower && after.parse == before.parse,
            "memory hit parsed or lowered");

  int status = 0;
  std::string out = run_capture("'" + g_cli + "' compile '" + source_path("kernels/bell.qk") +
                                    "' --cache-dir '" + dir.string() + "'",
                                &status);
  o.require(status == 0 && out.find(" disk-hit") != std::string::npos,
            "second process did not hit the disk cache: " + out);

  qk::QJIT second(opts);
  auto loaded = second.jit_compile(bell);
  o.require(loaded.provenance == qk::Provenance::DiskHit, "fresh instance missed the disk cache");
  o.require(*loaded.kernel == *cold.kernel, "loaded program differs from fresh compile");
  qk::ExecOptions ex;
  ex.shots = 2000;
  ex.seed = 99;
  qk::ArgPack pack{{"q", qk::QRegArg{2}}};
  auto fresh_counts = qk::execute(first.registry(), *cold.kernel, pack, ex).results.counts;
  auto loaded_counts = qk::execute(second.registry(), *loaded.kernel, pack, ex).results.counts;
  o.require(fresh_counts == loaded_counts, "seeded counts differ after loading");

  std::string dag = read_file(source_path("kernels/dag.qk"));
  std::string edited = std::regex_replace(dag, std::regex("Rz\\(q\\[0\\], 0\\.25\\)"), "Rz(q[0], 0.3)");
  o.require(edited != dag, "could not edit kernel a");
  qk::QJIT base({std::nullopt, false}), changed({std::nullopt, false});
  base.compile_file(dag);
  changed.compile_file(edited);
  auto digest = [](qk::QJIT& j, const char* n) { return j.registry().get(n)->digest; };
  o.require(digest(base, "a") != digest(changed, "a"), "edited kernel kept its digest");
  o.require(digest(base, "c") != digest(changed, "c"), "caller c kept its digest");
  o.require(digest(base, "d") != digest(changed, "d"), "root d kept its digest");
  o.require(digest(base, "b") == digest(changed, "b"), "unrelated kernel b changed digest");
  fs::remove_all(dir);
  if (o.ok) o.detail = "miss, memory hit (0 parse/lower), cross-process disk hit, equal counts, root digest flips";
  return o;
}

int bench_instructions(int steps) {
  int status = 0;
  std::string out = run_capture("'" + g_cli + "' bench trotter --no-cache --operator '" +
                                    source_path("kernels/deuteron.pauli") + "' --steps " +
                                    std::to_string(steps),
                                &status);
  std::smatch m;
  if (status != 0 || !std::regex_search(out, m, std::regex("instructions: (\\d+)"))) return -1;
  return std::stoi(m[1]);
}

Outcome trotter() {
  Outcome o;
  const double theta = 0.37, coeff = 0.7;
  double worst = 0.0;
  int words = 0;
  const std::string letters = "IXYZ";
  for (int code = 1; code < 64; ++code) {
    std::string word;
    qk::PauliWord pw;
    for (int q = 0; q < 3; ++q) {
      char p = letters[static_cast<std::size_t>((code >> (2 * (2 - q))) & 3)];
      word += p;
      if (p != 'I') pw[q] = p;
    }
    qk::PauliOperator op;
    op.add_term(pw, coeff);
    auto circ = qk::exp_i_theta({0, 1, 2}, theta, op);
    Mat got = qk::circuit_unitary(qk::flatten(circ), 3);
    Mat gen = kI * theta * coeff * pauli_string(word);
    Mat want = gen.exp();
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
    ++words;
  }
  o.require(words == 63, "enumerated " + std::to_string(words) + " words");
  o.require(worst < 1e-10, "max deviation " + std::to_string(worst));
  int one = bench_instructions(1), two = bench_instructions(2);
  o.require(one > 0 && two == 2 * one,
            "bench counts " + std::to_string(one) + " and " + std::to_string(two));
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "63 words, max deviation %.2e; bench %d -> %d instructions",
                  worst, one, two);
    o.detail = buf;
  }
  return o;
}

Outcome ftqc_qec() {
  Outcome o;
  auto jit = load_kernels("qec.qk");
  const auto& reg = jit->registry();
  const std::map<int, int> syndrome{{-1, 0}, {0, 1}, {1, 3}, {2, 2}};
  for (int logical : {0, 1}) {
    for (auto [err, expected] : syndrome) {
      qk::ExecOptions ex;
      ex.backend = "ftqc";
      ex.mode = qk::ExecMode::Ftqc;
      ex.shots = 0;
      ex.seed = static_cast<std::uint64_t>(17 + err);
      qk::ArgPack pack{{"q", qk::QRegArg{4}}, {"logical", logical}, {"err", err}};
      auto res = qk::execute(reg, *reg.get("qec_test"), pack, ex).results;
      std::size_t code_index = logical ? 0b1110 : 0;
      double fidelity = std::norm(res.amplitudes.at(code_index));
      std::string tag = "logical " + std::to_string(logical) + " err " + std::to_string(err);
      o.require(std::abs(fidelity - 1.0) < 1e-12, tag + ": fidelity " + std::to_string(fidelity));
      o.require(res.log == std::vector<std::string>{"Syndrome value= " + std::to_string(expected)},
                tag + ": wrong syndrome log");
    }
  }
  if (o.ok) o.detail = "8 cases restored with fidelity 1; syndromes 0/1/3/2 for no error/q0/q1/q2";
  return o;
}

Outcome grover() {
  Outcome o;
  auto jit = load_kernels("grover.qk");
  const auto& reg = jit->registry();
  qk::ArgPack pack{{"q", qk::QRegArg{3}}, {"oracle_var", qk::KernelRef{"cz_oracle"}}, {"iterations", 1}};

  // Brute force: uniform state, phase oracle, inversion about the mean.
  auto marked = [](std::size_t i) {
    int x0 = (i >> 2) & 1, x1 = (i >> 1) & 1, x2 = i & 1;
    return ((x0 & x2) ^ (x1 & x2)) == 1;
  };
  Vec psi = Vec::Constant(8, 1.0 / std::sqrt(8.0));
  for (std::size_t i = 0; i < 8; ++i)
    if (marked(i)) psi(static_cast<Eigen::Index>(i)) *= -1.0;
  C mean = psi.mean();
  for (Eigen::Index i = 0; i < 8; ++i) psi(i) = 2.0 * mean - psi(i);
  double want = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    if (marked(i)) want += std::norm(psi(static_cast<Eigen::Index>(i)));

  qk::ExecOptions exact;
  exact.shots = 0;
  auto amps = qk::execute(reg, *reg.get("run_grover"), pack, exact).results.amplitudes;
  double got = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    if (marked(i)) got += std::norm(amps.at(i));
  o.require(std::abs(got - want) < 1e-10, "marked probability " + std::to_string(got) + " vs " +
                                              std::to_string(want));

  const std::int64_t shots = 100000;
  qk::ExecOptions sampled;
  sampled.shots = shots;
  sampled.seed = 4242;
  auto counts = qk::execute(reg, *reg.get("run_grover"), pack, sampled).results.counts;
  for (std::size_t i = 0; i < 8; ++i) {
    double p = std::norm(amps.at(i));
    double mu = p * static_cast<double>(shots);
    double sigma = std::sqrt(static_cast<double>(shots) * p * (1 - p));
    std::string key = qk::basis_label(i, 3);
    double seen = counts.count(key) ? static_cast<double>(counts.at(key)) : 0.0;
    o.require(std::abs(seen - mu) <= 4 * sigma + 1e-9, "count for " + key + " outside 4 sigma");
  }
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "marked probability %.12f (oracle %.12f); 1e5 shots within 4 sigma",
                  got, want);
    o.detail = buf;
  }
  return o;
}

Outcome properties() {
  Outcome o;
  int status = std::system(("'" + g_property_bin + "' --gtest_brief=1 > /dev/null 2>&1").c_str());
  o.require(status == 0, "property suite failed; run " + g_property_bin + " for details");
  if (o.ok) o.detail = "adjoint, peephole, Jordan-Wigner, mode equivalence, norm suites green";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: qk_acceptance <qk-cli> <property-test-binary>\n";
    return 2;
  }
  g_cli = argv[1];
  g_property_bin = argv[2];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"vqe-deuteron", vqe_deuteron},   {"synthesis", synthesis}, {"compute-action", compute_action},
      {"qjit-cache", cache},            {"trotter", trotter},     {"ftqc-qec", ftqc_qec},
      {"grover", grover},               {"property-suites", properties},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
