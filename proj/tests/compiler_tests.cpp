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

#include <filesystem>
#include <fstream>
#include <thread>

#include "oracle.hpp"
#include "qk/compiler.hpp"
#include "qk/error.hpp"
#include "qk/parser.hpp"
#include "qk/printer.hpp"
#include "qk/qjit.hpp"
#include "qk/runtime.hpp"
#include "qk/serialize.hpp"

namespace fs = std::filesystem;

namespace {

qk::ErrorCode compile_error(qk::QJIT& jit, const std::string& src) {
  try {
    jit.jit_compile(src);
  } catch (const qk::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << src;
  return qk::ErrorCode::RuntimeError;
}

qk::QJIT memory_jit() { return qk::QJIT(qk::QJITOptions{std::nullopt, false}); }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("qk-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(TopoSort, DependenciesFirstTiesAlphabetical) {
  std::map<std::string, std::set<std::string>> g{{"d", {"b", "c"}}, {"c", {"a"}}, {"b", {}}, {"a", {}}};
  EXPECT_EQ(qk::topo_sort(g), (std::vector<std::string>{"a", "b", "c", "d"}));
  std::string root = "c";
  EXPECT_EQ(qk::topo_sort(g, &root), (std::vector<std::string>{"a", "c"}));
}

TEST(TopoSort, CycleIsReported) {
  std::map<std::string, std::set<std::string>> g{{"a", {"b"}}, {"b", {"a"}}};
  try {
    qk::topo_sort(g);
    FAIL();
  } catch (const qk::Error& e) {
    EXPECT_EQ(e.code(), qk::ErrorCode::CyclicDependency);
    EXPECT_NE(std::string(e.what()).find("a -> b -> a"), std::string::npos) << e.what();
  }
}

TEST(Digest, KnownValues) {
  // Reference values from an independent SHA-256 implementation.
  EXPECT_EQ(qk::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(qk::kernel_digest("", {}), "a37c10f1fe967b42a0fc06e18a73482ee7fef68d04351e87acd059ad4c0ddb1e");
}

TEST(Digest, DependencyOrderDoesNotMatterButContentDoes) {
  auto a = qk::kernel_digest("src", {"x", "y"});
  EXPECT_EQ(a, qk::kernel_digest("src", {"y", "x"}));
  EXPECT_NE(a, qk::kernel_digest("src", {"x", "z"}));
  EXPECT_NE(a, qk::kernel_digest("src2", {"x", "y"}));
  EXPECT_EQ(a.size(), 64u);
}

TEST(Lowering, Errors) {
  auto jit = memory_jit();
  jit.jit_compile("def helper(q : qreg):\n    X(q[0])\n");
  using E = qk::ErrorCode;
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    nothere(q)\n"), E::UnknownKernel);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    k(q)\n"), E::CyclicDependency);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    Rz(q[0], y)\n"), E::UndefinedName);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    CX(q[0])\n"), E::ArityError);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    helper = 1\n"), E::ShadowedKernelName);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    with compute:\n        H(q[0])\n    X(q[0])\n"),
            E::ComputeWithoutAction);
  EXPECT_EQ(compile_error(jit,
                          "def k(q : qreg):\n    with compute:\n        Measure(q[0])\n"
                          "    with action:\n        X(q[1])\n"),
            E::MeasureInComputeBlock);
  EXPECT_EQ(compile_error(jit,
                          "def k(q : qreg):\n    with decompose(q, magic) as u:\n        u = np.eye(2)\n"),
            E::UnknownSynthesisMethod);
  EXPECT_EQ(compile_error(jit, "def k(q : qreg):\n    helper(q, 1)\n"), E::ArityError);
}

TEST(Lowering, DependenciesAreRecorded) {
  auto jit = oracle::load_kernels("dag.qk");
  auto d = jit->registry().get("d");
  EXPECT_EQ(d->direct_dependencies, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(d->dependencies, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(jit->registry().get("a")->dependencies.empty());
}

TEST(Lowering, KernelSignatureArgumentIsADependencyOnlyWhenNamed) {
  auto jit = oracle::load_kernels("grover.qk");
  auto g = jit->registry().get("run_grover");
  EXPECT_EQ(g->direct_dependencies, (std::vector<std::string>{"reflect_about_uniform"}));
}

TEST(Serialize, RoundTripsEveryCorpusKernel) {
  for (const char* f : {"bell.qk", "dag.qk", "ccnot.qk", "ucc1.qk", "grover.qk", "deuteron.qk",
                        "trotter.qk", "qec.qk"}) {
    auto jit = oracle::load_kernels(f);
    for (const auto& name : jit->registry().names()) {
      const auto& k = *jit->registry().get(name);
      auto bytes = qk::serialize_kernel(k);
      EXPECT_EQ(qk::deserialize_kernel(bytes), k) << name;
    }
  }
}

TEST(Serialize, TruncationIsCacheCorruption) {
  auto jit = oracle::load_kernels("qec.qk");
  auto bytes = qk::serialize_kernel(*jit->registry().get("applyQEC"));
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, bytes.size() / 2, bytes.size() - 1}) {
    try {
      qk::deserialize_kernel(std::string_view(bytes).substr(0, cut));
      ADD_FAILURE() << "accepted truncation at " << cut;
    } catch (const qk::Error& e) {
      EXPECT_EQ(e.code(), qk::ErrorCode::CacheCorruption);
    }
  }
}

TEST(DiskCache, WriteReadAndMissingEntries) {
  TempDir dir;
  qk::DiskCache cache(dir.path());
  qk::CacheEntry e{std::string(64, 'a'), std::string("payload\0bytes", 13), 1700000000, qk::kCacheFormatVersion};
  cache.write(e);
  EXPECT_TRUE(fs::exists(dir.path() / "aa" / "aa" / (e.digest + ".qir")));
  auto back = cache.read(e.digest);
  ASSERT_TRUE(back);
  EXPECT_EQ(back->payload, e.payload);
  EXPECT_EQ(back->created_at, e.created_at);
  EXPECT_FALSE(cache.read(std::string(64, 'b')));
  auto st = cache.stats();
  EXPECT_EQ(st.entries, 1u);
  EXPECT_GT(st.bytes, 0u);
  cache.clear();
  EXPECT_EQ(cache.stats().entries, 0u);
}

TEST(DiskCache, CorruptByteIsAMissWithWarning) {
  TempDir dir;
  const std::string bell = oracle::read_file(oracle::source_path("kernels/bell.qk"));
  std::string digest;
  {
    qk::QJIT jit({dir.path(), true});
    digest = jit.jit_compile(bell).kernel->digest;
  }
  qk::DiskCache cache(dir.path());
  auto path = cache.path_for(digest);
  std::string bytes = oracle::read_file(path.string());
  bytes[bytes.size() / 2] ^= 0x5a;
  std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;

  qk::QJIT jit({dir.path(), true});
  auto r = jit.jit_compile(bell);
  EXPECT_EQ(r.provenance, qk::Provenance::Miss);
  ASSERT_FALSE(jit.warnings().empty());
  EXPECT_NE(jit.warnings()[0].find("warning"), std::string::npos);
  EXPECT_EQ(jit.counters().lower, 1u);

  // The miss rewrote a good record.
  qk::QJIT again({dir.path(), true});
  EXPECT_EQ(again.jit_compile(bell).provenance, qk::Provenance::DiskHit);
}

TEST(DiskCache, ForeignVersionIsIgnored) {
  TempDir dir;
  qk::DiskCache cache(dir.path());
  qk::CacheEntry e{std::string(64, 'c'), "x", 0, qk::kCacheFormatVersion + 1};
  cache.write(e);
  std::vector<std::string> warnings;
  EXPECT_FALSE(cache.read(e.digest, &warnings));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(QJIT, MemoryHitSkipsFrontend) {
  auto jit = memory_jit();
  const std::string src = "def k(q : qreg):\n    H(q[0])\n";
  EXPECT_EQ(jit.jit_compile(src).provenance, qk::Provenance::Miss);
  auto c1 = jit.counters();
  EXPECT_EQ(jit.jit_compile(src).provenance, qk::Provenance::MemoryHit);
  auto c2 = jit.counters();
  EXPECT_EQ(c2.parse, c1.parse);
  EXPECT_EQ(c2.lower, c1.lower);
  EXPECT_EQ(c2.memory_hits, 1u);
}

TEST(QJIT, AngleChangeIsAMiss) {
  auto jit = memory_jit();
  auto a = jit.jit_compile("def k(q : qreg):\n    Rz(q[0], 0.5)\n");
  auto b = jit.jit_compile("def k(q : qreg):\n    Rz(q[0], 0.25)\n");
  EXPECT_EQ(b.provenance, qk::Provenance::Miss);
  EXPECT_NE(a.kernel->digest, b.kernel->digest);
  EXPECT_EQ(jit.registry().get("k")->digest, b.kernel->digest);
}

TEST(QJIT, WhitespaceOnlyEditKeepsDigest) {
  auto jit = memory_jit();
  auto a = jit.jit_compile("def k(q : qreg):\n    Rz(q[0], 0.5)\n");
  auto b = jit.jit_compile("def k(q:qreg):\n    Rz( q[0],0.5 )  # note\n");
  EXPECT_EQ(a.kernel->digest, b.kernel->digest);
}

TEST(QJIT, RecompiledDependencyInvalidatesMemoryEntry) {
  auto jit = memory_jit();
  const std::string caller = "def outer(q : qreg):\n    inner(q)\n";
  jit.jit_compile("def inner(q : qreg):\n    X(q[0])\n");
  auto first = jit.jit_compile(caller, {"inner"});
  jit.jit_compile("def inner(q : qreg):\n    Y(q[0])\n");
  auto second = jit.jit_compile(caller, {"inner"});
  EXPECT_EQ(second.provenance, qk::Provenance::Miss);
  EXPECT_NE(first.kernel->digest, second.kernel->digest);
  // Registering a new version leaves the old one intact for its holders.
  EXPECT_EQ(first.kernel->direct_dependencies, (std::vector<std::string>{"inner"}));
}

TEST(QJIT, RewrittenSourceIsCanonical) {
  auto jit = memory_jit();
  jit.jit_compile("def k(q:qreg):\n    H( q[0] )\n");
  auto text = jit.rewritten_source("k");
  ASSERT_TRUE(text);
  EXPECT_EQ(*text, qk::print_kernel_source(qk::parse_kernel_source(*text)));
}

TEST(QJIT, CycleAcrossFileIsRejected) {
  auto jit = memory_jit();
  try {
    jit.compile_file("def a(q : qreg):\n    b(q)\n\ndef b(q : qreg):\n    a(q)\n");
    FAIL();
  } catch (const qk::Error& e) {
    EXPECT_EQ(e.code(), qk::ErrorCode::CyclicDependency);
    EXPECT_NE(std::string(e.what()).find("a -> b -> a"), std::string::npos);
  }
}

TEST(QJIT, ConcurrentCompilesAgree) {
  TempDir dir;
  const std::string src = oracle::read_file(oracle::source_path("kernels/grover.qk"));
  std::vector<std::string> digests(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < digests.size(); ++t) {
    threads.emplace_back([&, t] {
      qk::QJIT jit({dir.path(), true});
      auto results = jit.compile_file(src);
      digests[t] = results.back().kernel->digest;
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& d : digests) EXPECT_EQ(d, digests[0]);
  qk::QJIT jit({dir.path(), true});
  for (const auto& r : jit.compile_file(src)) EXPECT_EQ(r.provenance, qk::Provenance::DiskHit);
}

TEST(QJIT, CountersPersistAcrossSessions) {
  TempDir dir;
  qk::DiskCache cache(dir.path());
  qk::CacheCounters delta;
  delta.misses = 2;
  delta.disk_hits = 1;
  cache.add_counters(delta);
  cache.add_counters(delta);
  auto c = cache.load_counters();
  EXPECT_EQ(c.misses, 4u);
  EXPECT_EQ(c.disk_hits, 2u);
}
