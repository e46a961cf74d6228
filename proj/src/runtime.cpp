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

#include "qk/runtime.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "qk/error.hpp"
#include "qk/interpreter.hpp"
#include "qk/statevector.hpp"
#include "qk/transforms.hpp"

namespace qk {

namespace {

constexpr BackendInfo kBackends[] = {
    {"qpp-like", true, true, false},
    {"ftqc", true, true, true},
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string counts_key(const std::vector<int>& last, int n) {
  std::string key(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if (last[static_cast<std::size_t>(q)] == 1) key[static_cast<std::size_t>(q)] = '1';
  }
  return key;
}

bool any_measured(const std::vector<int>& last) {
  return std::any_of(last.begin(), last.end(), [](int b) { return b >= 0; });
}

/// True when every Measure comes after all other operations on its qubit and
/// nothing resets.
bool measurements_are_terminal(const std::vector<Instruction>& instrs) {
  std::set<int> measured;
  for (const Instruction& i : instrs) {
    if (i.name == "Reset") return false;
    if (i.name == "Measure") {
      measured.insert(i.targets[0]);
      continue;
    }
    for (int q : i.targets) {
      if (measured.count(q)) return false;
    }
    for (int q : i.controls) {
      if (measured.count(q)) return false;
    }
  }
  return true;
}

void run_trajectory(const std::vector<Instruction>& instrs, StateVector& sv, Rng& rng,
                    std::vector<int>& last) {
  for (const Instruction& i : instrs) {
    if (i.name == "Measure") {
      last[static_cast<std::size_t>(i.targets[0])] = sv.measure(i.targets[0], rng);
    } else if (i.name == "Reset") {
      sv.reset(i.targets[0], rng);
    } else {
      sv.apply(i);
    }
  }
}

struct Traced {
  BoundArgs bound;
  Composite circuit;
  std::vector<std::string> log;
};

Traced trace(const KernelRegistry& registry, const CompiledKernel& k, const ArgPack& pack) {
  Traced t;
  t.bound = bind_args(k, pack, registry);
  t.circuit = Interpreter(registry).trace(k, t.bound.values, &t.log);
  return t;
}

std::vector<Instruction> unitary_part(const Composite& c, std::string_view what) {
  auto instrs = flatten(c);
  for (const Instruction& i : instrs) {
    if (i.name == "Measure" || i.name == "Reset") {
      throw Error(ErrorCode::NonUnitarySubcircuit,
                  std::string(what) + " needs a kernel without " + i.name);
    }
  }
  return instrs;
}

double parity_expectation(const std::vector<double>& probs, std::size_t mask) {
  double e = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    e += (std::popcount(i & mask) % 2 ? -1.0 : 1.0) * probs[i];
  }
  return e;
}

/// Rotates each term qubit into the Z basis; returns the parity mask.
std::size_t change_basis(StateVector& sv, const PauliWord& word, int n) {
  std::size_t mask = 0;
  for (const auto& [q, p] : word) {
    if (p == 'X') sv.apply(make_gate("H", {q}));
    if (p == 'Y') {
      sv.apply(make_gate("Sdg", {q}));
      sv.apply(make_gate("H", {q}));
    }
    mask |= std::size_t{1} << (n - 1 - q);
  }
  return mask;
}

void check_observable(const PauliOperator& op, int n) {
  if (!op.is_hermitian(1e-10)) {
    throw Error(ErrorCode::NonHermitianObservable, "observable has complex coefficients: " +
                                                       op.to_string());
  }
  if (op.max_qubit() >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "observable acts on qubit " +
                                                std::to_string(op.max_qubit()) +
                                                " of a " + std::to_string(n) + "-qubit register");
  }
}

}  // namespace

std::optional<ExecMode> parse_exec_mode(std::string_view name) {
  if (name == "circuit") return ExecMode::Circuit;
  if (name == "ftqc") return ExecMode::Ftqc;
  return std::nullopt;
}

std::string_view exec_mode_name(ExecMode m) noexcept {
  return m == ExecMode::Circuit ? "circuit" : "ftqc";
}

const BackendInfo& find_backend(std::string_view name) {
  for (const auto& b : kBackends) {
    if (b.name == name) return b;
  }
  throw Error(ErrorCode::BackendNotFound, "no backend named '" + std::string(name) + "'");
}

std::vector<std::string> backend_names() {
  std::vector<std::string> out;
  for (const auto& b : kBackends) out.emplace_back(b.name);
  return out;
}

std::map<std::string, std::string> parse_backend_config(std::string_view text) {
  std::map<std::string, std::string> out;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::IoError, "backend config line " + std::to_string(lineno) +
                                          ": expected 'key: value'");
    }
    out[trim(std::string_view(t).substr(0, colon))] = trim(std::string_view(t).substr(colon + 1));
  }
  return out;
}

QReg execute(const KernelRegistry& registry, const CompiledKernel& k, const ArgPack& pack,
             const ExecOptions& opts) {
  const BackendInfo& backend = find_backend(opts.backend);
  if (opts.shots < 0) throw Error(ErrorCode::RuntimeError, "shots must be non-negative");

  if (opts.mode == ExecMode::Ftqc) {
    if (!backend.mid_circuit_measure) {
      throw Error(ErrorCode::BackendCapabilityError,
                  "backend '" + std::string(backend.name) + "' cannot run ftqc programs");
    }
    Interpreter interp(registry);
    QReg q;
    std::map<std::string, CValue> byref;
    const std::int64_t runs = std::max<std::int64_t>(opts.shots, 1);
    for (std::int64_t s = 0; s < runs; ++s) {
      BoundArgs bound = bind_args(k, pack, registry);
      if (s == 0) {
        q.size = bound.qreg_size;
        q.name = bound.qreg_name;
      }
      StateVector sv(bound.qreg_size);
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
      LiveState live{&sv, &rng, {}};
      std::vector<std::string> log;
      interp.run_live(k, bound.values, live, &log);
      if (opts.shots > 0 && any_measured(live.last_measurement)) {
        ++q.results.counts[counts_key(live.last_measurement, bound.qreg_size)];
      }
      if (s == 0) {
        q.results.log = std::move(log);
        byref = collect_byref(bound);
        if (opts.shots == 0) q.results.amplitudes = sv.amplitudes();
      }
    }
    persist_byref(q, byref);
    write_back(pack, byref);
    return q;
  }

  Traced t = trace(registry, k, pack);
  Composite circuit = opts.optimize ? peephole_optimize(t.circuit) : t.circuit;
  auto instrs = flatten(circuit);
  const int n = t.bound.qreg_size;
  QReg q;
  q.size = n;
  q.name = t.bound.qreg_name;
  q.results.log = std::move(t.log);

  StateVector sv(n);
  if (measurements_are_terminal(instrs)) {
    std::vector<int> measured(static_cast<std::size_t>(n), -1);
    for (const Instruction& i : instrs) {
      if (i.name == "Measure") {
        measured[static_cast<std::size_t>(i.targets[0])] = 1;
      } else {
        sv.apply(i);
      }
    }
    if (opts.shots == 0) {
      q.results.amplitudes = sv.amplitudes();
    } else if (any_measured(measured)) {
      auto probs = sv.probabilities();
      std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
      Rng rng(derive_seed(opts.seed, 0));
      std::map<std::size_t, std::int64_t> hist;
      for (std::int64_t s = 0; s < opts.shots; ++s) ++hist[dist(rng)];
      std::vector<int> last(static_cast<std::size_t>(n), -1);
      for (const auto& [index, count] : hist) {
        for (int b = 0; b < n; ++b) {
          bool one = (index >> (n - 1 - b)) & 1U;
          last[static_cast<std::size_t>(b)] = measured[static_cast<std::size_t>(b)] == 1 ? one : -1;
        }
        q.results.counts[counts_key(last, n)] += count;
      }
    }
  } else if (opts.shots == 0) {
    Rng rng(derive_seed(opts.seed, 0));
    std::vector<int> last(static_cast<std::size_t>(n), -1);
    run_trajectory(instrs, sv, rng, last);
    q.results.amplitudes = sv.amplitudes();
  } else {
    for (std::int64_t s = 0; s < opts.shots; ++s) {
      StateVector shot(n);
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
      std::vector<int> last(static_cast<std::size_t>(n), -1);
      run_trajectory(instrs, shot, rng, last);
      if (any_measured(last)) ++q.results.counts[counts_key(last, n)];
    }
  }

  auto byref = collect_byref(t.bound);
  persist_byref(q, byref);
  write_back(pack, byref);
  return q;
}

double expectation(const std::vector<Complex>& state, const PauliOperator& op, int num_qubits) {
  check_observable(op, num_qubits);
  double total = 0.0;
  for (const auto& [word, c] : op.terms()) {
    if (word.empty()) {
      total += c.real();
      continue;
    }
    StateVector sv(num_qubits);
    sv.set_amplitudes(state);
    std::size_t mask = change_basis(sv, word, num_qubits);
    total += c.real() * parity_expectation(sv.probabilities(), mask);
  }
  return total;
}

double observe(const KernelRegistry& registry, const CompiledKernel& k, const PauliOperator& op,
               const ArgPack& pack, const ExecOptions& opts) {
  find_backend(opts.backend);
  if (opts.shots < 0) throw Error(ErrorCode::RuntimeError, "shots must be non-negative");
  Traced t = trace(registry, k, pack);
  const int n = t.bound.qreg_size;
  check_observable(op, n);
  auto instrs = unitary_part(t.circuit, "observe");
  StateVector sv(n);
  for (const Instruction& i : instrs) sv.apply(i);
  if (opts.shots == 0) return expectation(sv.amplitudes(), op, n);

  double total = 0.0;
  std::uint64_t term = 0;
  for (const auto& [word, c] : op.terms()) {
    ++term;
    if (word.empty()) {
      total += c.real();
      continue;
    }
    StateVector rotated = sv;
    std::size_t mask = change_basis(rotated, word, n);
    auto probs = rotated.probabilities();
    std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
    Rng rng(derive_seed(opts.seed, term));
    std::int64_t sum = 0;
    for (std::int64_t s = 0; s < opts.shots; ++s) sum += std::popcount(dist(rng) & mask) % 2 ? -1 : 1;
    total += c.real() * static_cast<double>(sum) / static_cast<double>(opts.shots);
  }
  return total;
}

Composite extract_composite(const KernelRegistry& registry, const CompiledKernel& k,
                            const ArgPack& pack, bool optimize) {
  Composite c = trace(registry, k, pack).circuit;
  flatten(c);
  return optimize ? peephole_optimize(c) : c;
}

Matrix as_unitary_matrix(const KernelRegistry& registry, const CompiledKernel& k,
                         const ArgPack& pack) {
  Traced t = trace(registry, k, pack);
  return circuit_unitary(unitary_part(t.circuit, "as_unitary_matrix"), t.bound.qreg_size);
}

std::string openqasm(const KernelRegistry& registry, const CompiledKernel& k, const ArgPack& pack) {
  Traced t = trace(registry, k, pack);
  return to_openqasm(flatten(t.circuit), t.bound.qreg_size);
}

}  // namespace qk
