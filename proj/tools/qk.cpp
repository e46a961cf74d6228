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

#include <CLI11.hpp>

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qk/args.hpp"
#include "qk/error.hpp"
#include "qk/fermion.hpp"
#include "qk/ir.hpp"
#include "qk/linalg.hpp"
#include "qk/pauli.hpp"
#include "qk/printer.hpp"
#include "qk/qjit.hpp"
#include "qk/results.hpp"
#include "qk/runtime.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCompile = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitBackend = 5;

constexpr std::string_view kTrotterKernel = R"(def trotter_circ(q : qreg,
        exp_args: List[PauliOperator],
        n_steps: int):
    for i in range(n_steps):
        for exp_arg in exp_args:
            exp_i_theta(q, 1.0, exp_arg)
)";

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qk::Error(qk::ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::int64_t since_ns(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t)
      .count();
}

/// Pauli text, or fermion text (anything with `[`) mapped through Jordan-Wigner.
qk::PauliOperator load_operator(const std::string& path) {
  std::string text = read_text(path);
  if (text.find('[') != std::string::npos) return qk::jordan_wigner(qk::parse_fermion(text));
  return qk::parse_pauli(text);
}

struct CacheFlags {
  bool no_cache = false;
  std::string cache_dir;

  qk::QJITOptions options() const {
    qk::QJITOptions o;
    o.use_disk = !no_cache;
    if (!cache_dir.empty()) o.cache_dir = cache_dir;
    return o;
  }
  void add_to(CLI::App* cmd) {
    cmd->add_flag("--no-cache", no_cache, "Skip the on-disk program cache");
    cmd->add_option("--cache-dir", cache_dir, "On-disk cache directory");
  }
};

struct KernelFlags {
  std::string file;
  std::string kernel;
  std::string args;

  void add_to(CLI::App* cmd) {
    cmd->add_option("file", file, "Kernel source file")->required();
    cmd->add_option("--kernel", kernel, "Kernel to use (default: last kernel in the file)");
    cmd->add_option("--args", args, "Arguments: a JSON file, or inline JSON starting with '{'");
  }
  qk::ArgPack pack() const {
    if (args.empty()) return {};
    if (args.front() == '{') return qk::argpack_from_json(args);
    return qk::argpack_from_json(read_text(args));
  }
};

/// Compiles the file and flushes counters and warnings.
struct Session {
  qk::QJIT jit;
  std::vector<qk::CompileResult> compiled;

  Session(const CacheFlags& cache, const std::string& source) : jit(cache.options()) {
    try {
      compiled = jit.compile_file(source);
    } catch (...) {
      finish();
      throw;
    }
    finish();
  }

  void finish() {
    for (const auto& w : jit.warnings()) std::cerr << w << "\n";
    if (const auto* disk = jit.disk()) {
      try {
        disk->add_counters(jit.counters());
      } catch (const qk::Error& e) {
        std::cerr << "warning: could not update cache statistics: " << e.what() << "\n";
      }
    }
  }

  const qk::CompiledKernel& kernel(const std::string& name) const {
    if (!name.empty()) return *jit.registry().get(name);
    if (compiled.empty()) throw qk::Error(qk::ErrorCode::UnknownKernel, "file defines no kernels");
    return *compiled.back().kernel;
  }
};

int cmd_compile(const KernelFlags& kf, const CacheFlags& cache) {
  Session s(cache, read_text(kf.file));
  for (const auto& r : s.compiled) {
    std::cout << r.kernel->name << " " << r.kernel->digest << " "
              << qk::provenance_name(r.provenance) << "\n";
  }
  return 0;
}

struct RunFlags {
  /// Empty picks "ftqc" in ftqc mode and "qpp-like" otherwise.
  std::string qpu;
  std::int64_t shots = 1024;
  std::uint64_t seed = 0;
  std::string mode = "circuit";
  std::string qpu_config;
  bool optimize = false;
  bool no_timing = false;
  /// When set, also records <operator> under the file's stem.
  std::string operator_file;
};

int cmd_run(const KernelFlags& kf, const CacheFlags& cache, const RunFlags& rf) {
  qk::ExecOptions opts;
  auto mode = qk::parse_exec_mode(rf.mode);
  if (!mode) throw CLI::ValidationError("--mode", "expected circuit or ftqc");
  opts.mode = *mode;
  opts.backend = !rf.qpu.empty() ? rf.qpu : *mode == qk::ExecMode::Ftqc ? "ftqc" : "qpp-like";
  qk::find_backend(opts.backend);
  opts.shots = rf.shots;
  opts.seed = rf.seed;
  opts.optimize = rf.optimize;
  if (!rf.qpu_config.empty()) opts.config = qk::parse_backend_config(read_text(rf.qpu_config));

  Session s(cache, read_text(kf.file));
  const auto& k = s.kernel(kf.kernel);
  auto pack = kf.pack();
  auto start = std::chrono::steady_clock::now();
  qk::QReg q = qk::execute(s.jit.registry(), k, pack, opts);
  if (!rf.operator_file.empty()) {
    qk::ExecOptions obs = opts;
    obs.mode = qk::ExecMode::Circuit;
    q.results.expectations[std::filesystem::path(rf.operator_file).stem().string()] =
        qk::observe(s.jit.registry(), k, load_operator(rf.operator_file), pack, obs);
  }

  qk::ResultsDocument doc;
  doc.timing.execute_ns = since_ns(start);
  doc.timing.parse_ns = s.jit.timing().parse_ns;
  doc.timing.lower_ns = s.jit.timing().lower_ns;
  doc.kernel = k.name;
  doc.backend = opts.backend;
  doc.mode = std::string(qk::exec_mode_name(opts.mode));
  doc.seed = rf.seed;
  doc.shots = rf.shots;
  doc.results = std::move(q.results);
  std::cout << qk::results_to_json(doc, !rf.no_timing);
  return 0;
}

int cmd_print(const KernelFlags& kf, const CacheFlags& cache, bool tree, bool optimize) {
  Session s(cache, read_text(kf.file));
  const auto& k = s.kernel(kf.kernel);
  auto c = qk::extract_composite(s.jit.registry(), k, kf.pack(), optimize);
  std::cout << (tree ? qk::dump_tree(c) : qk::dump(qk::flatten(c)));
  return 0;
}

int cmd_openqasm(const KernelFlags& kf, const CacheFlags& cache) {
  Session s(cache, read_text(kf.file));
  std::cout << qk::openqasm(s.jit.registry(), s.kernel(kf.kernel), kf.pack());
  return 0;
}

int cmd_unitary(const KernelFlags& kf, const CacheFlags& cache) {
  Session s(cache, read_text(kf.file));
  std::cout << qk::format_matrix_text(
      qk::as_unitary_matrix(s.jit.registry(), s.kernel(kf.kernel), kf.pack()));
  return 0;
}

int cmd_observe(const KernelFlags& kf, const CacheFlags& cache, const std::string& op_file,
                std::int64_t shots, std::uint64_t seed) {
  auto op = load_operator(op_file);
  Session s(cache, read_text(kf.file));
  qk::ExecOptions opts;
  opts.shots = shots;
  opts.seed = seed;
  double e = qk::observe(s.jit.registry(), s.kernel(kf.kernel), op, kf.pack(), opts);
  std::cout << qk::format_float(e) << "\n";
  return 0;
}

int cmd_bench_trotter(const CacheFlags& cache, const std::string& op_file, int steps) {
  auto op = load_operator(op_file);
  qk::QJIT jit(cache.options());
  auto compiled = jit.jit_compile(kTrotterKernel);
  for (const auto& w : jit.warnings()) std::cerr << w << "\n";

  qk::ArgList terms;
  for (const auto& [word, coeff] : op.terms()) {
    qk::PauliOperator t;
    t.add_term(word, coeff);
    terms.emplace_back(std::move(t));
  }
  int qubits = std::max(1, op.max_qubit() + 1);
  qk::ArgPack pack{{"q", qk::QRegArg{qubits}},
                   {"exp_args", std::move(terms)},
                   {"n_steps", std::int64_t{steps}}};
  auto start = std::chrono::steady_clock::now();
  auto c = qk::extract_composite(jit.registry(), *compiled.kernel, pack);
  auto instructions = qk::flatten(c).size();
  auto elapsed = since_ns(start);
  std::cout << "qubits: " << qubits << "\n"
            << "terms: " << op.size() << "\n"
            << "steps: " << steps << "\n"
            << "instructions: " << instructions << "\n"
            << "composition_ns: " << elapsed << "\n";
  return 0;
}

int cmd_cache_stats(const CacheFlags& cache) {
  qk::DiskCache disk(cache.cache_dir.empty() ? qk::default_cache_dir()
                                             : std::filesystem::path(cache.cache_dir));
  auto st = disk.stats();
  auto c = disk.load_counters();
  std::cout << "dir: " << disk.dir().string() << "\n"
            << "entries: " << st.entries << "\n"
            << "bytes: " << st.bytes << "\n"
            << "parse: " << c.parse << "\n"
            << "lower: " << c.lower << "\n"
            << "memory_hits: " << c.memory_hits << "\n"
            << "disk_hits: " << c.disk_hits << "\n"
            << "misses: " << c.misses << "\n";
  return 0;
}

int cmd_cache_clear(const CacheFlags& cache) {
  qk::DiskCache disk(cache.cache_dir.empty() ? qk::default_cache_dir()
                                             : std::filesystem::path(cache.cache_dir));
  disk.clear();
  return 0;
}

int exit_code_for(const qk::Error& e) {
  switch (qk::error_category(e.code())) {
    case qk::ErrorCategory::Compile: return kExitCompile;
    case qk::ErrorCategory::Backend: return kExitBackend;
    case qk::ErrorCategory::Runtime: return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  // Accept the single-dash `-qpu` spelling.
  std::vector<std::string> args(argv, argv + argc);
  for (auto& a : args) {
    if (a == "-qpu") a = "--qpu";
    if (a.rfind("-qpu=", 0) == 0) a = "-" + a;
  }
  std::vector<char*> argp;
  for (auto& a : args) argp.push_back(a.data());

  CLI::App app{"qk: compile and run quantum kernels"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  KernelFlags kf;
  CacheFlags cache;
  RunFlags rf;
  std::string op_file;
  int steps = 1;
  bool tree = false;
  bool optimize = false;
  std::int64_t observe_shots = 0;
  std::uint64_t observe_seed = 0;

  auto* compile = app.add_subcommand("compile", "Compile every kernel and report digests");
  compile->add_option("file", kf.file, "Kernel source file")->required();
  cache.add_to(compile);

  auto* run = app.add_subcommand("run", "Execute a kernel and print the results document");
  kf.add_to(run);
  cache.add_to(run);
  run->add_option("--qpu", rf.qpu, "Backend name");
  run->add_option("--shots", rf.shots, "Shot count; 0 keeps exact amplitudes")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--seed", rf.seed, "RNG seed");
  run->add_option("--mode", rf.mode, "circuit or ftqc")->check(CLI::IsMember({"circuit", "ftqc"}));
  run->add_option("--qpu-config", rf.qpu_config, "Backend configuration file");
  run->add_flag("--opt", rf.optimize, "Peephole-optimize before running");
  run->add_flag("--no-timing", rf.no_timing, "Leave timing out of the results document");
  run->add_option("--operator", rf.operator_file, "Also record the expectation of this operator");

  auto* print = app.add_subcommand("print", "Print the resolved instruction list");
  kf.add_to(print);
  cache.add_to(print);
  print->add_flag("--tree", tree, "Print the composite tree instead of the flat list");
  print->add_flag("--opt", optimize, "Peephole-optimize first");

  auto* qasm = app.add_subcommand("export-openqasm", "Print OpenQASM 2.0");
  kf.add_to(qasm);
  cache.add_to(qasm);

  auto* unitary = app.add_subcommand("unitary", "Print the kernel's unitary matrix");
  kf.add_to(unitary);
  cache.add_to(unitary);

  auto* obs = app.add_subcommand("observe", "Print the expectation of an operator");
  kf.add_to(obs);
  cache.add_to(obs);
  obs->add_option("--operator", op_file, "Pauli or fermion operator file")->required();
  obs->add_option("--shots", observe_shots, "0 for the exact value")->check(CLI::NonNegativeNumber);
  obs->add_option("--seed", observe_seed, "RNG seed");

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* trotter = bench->add_subcommand("trotter", "Compose a Trotter circuit for an operator");
  trotter->add_option("--operator", op_file, "Pauli or fermion operator file")->required();
  trotter->add_option("--steps", steps, "Trotter steps")->check(CLI::NonNegativeNumber);
  cache.add_to(trotter);

  auto* cachecmd = app.add_subcommand("cache", "Inspect the on-disk cache");
  cachecmd->require_subcommand(1);
  auto* stats = cachecmd->add_subcommand("stats", "Entries, bytes and hit counters");
  stats->add_option("--cache-dir", cache.cache_dir, "On-disk cache directory");
  auto* clear = cachecmd->add_subcommand("clear", "Remove every entry");
  clear->add_option("--cache-dir", cache.cache_dir, "On-disk cache directory");

  try {
    app.parse(static_cast<int>(argp.size()), argp.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*compile) return cmd_compile(kf, cache);
    if (*run) return cmd_run(kf, cache, rf);
    if (*print) return cmd_print(kf, cache, tree, optimize);
    if (*qasm) return cmd_openqasm(kf, cache);
    if (*unitary) return cmd_unitary(kf, cache);
    if (*obs) return cmd_observe(kf, cache, op_file, observe_shots, observe_seed);
    if (*trotter) return cmd_bench_trotter(cache, op_file, steps);
    if (*stats) return cmd_cache_stats(cache);
    if (*clear) return cmd_cache_clear(cache);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
