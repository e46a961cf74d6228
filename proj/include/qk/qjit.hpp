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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qk/compiler.hpp"

namespace qk {

/// Version of the on-disk record layout.
inline constexpr std::uint32_t kCacheFormatVersion = 1;

struct CacheEntry {
  std::string digest;
  /// serialize_kernel output.
  std::string payload;
  std::int64_t created_at = 0;  // seconds since the epoch
  std::uint32_t format_version = kCacheFormatVersion;
  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

struct CacheCounters {
  std::uint64_t parse = 0;
  std::uint64_t lower = 0;
  std::uint64_t memory_hits = 0;
  std::uint64_t disk_hits = 0;
  std::uint64_t misses = 0;
  CacheCounters& operator+=(const CacheCounters& o);
  friend bool operator==(const CacheCounters&, const CacheCounters&) = default;
};

/// `$QK_CACHE_DIR`, else `$XDG_CACHE_HOME/qk`, else `$HOME/.cache/qk`.
std::filesystem::path default_cache_dir();

/// Content-addressed program store laid out as `aa/bb/<digest>.qir`.
class DiskCache {
 public:
  explicit DiskCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(std::string_view digest) const;

  /// Temp file plus rename. Throws IoError.
  void write(const CacheEntry& entry) const;
  /// Nullopt when absent. A damaged or foreign-version record is also a miss,
  /// with a note appended to `warnings`.
  std::optional<CacheEntry> read(std::string_view digest,
                                 std::vector<std::string>* warnings = nullptr) const;

  struct Stats {
    std::size_t entries = 0;
    std::uintmax_t bytes = 0;
  };
  Stats stats() const;
  /// Removes every record and the counters file.
  void clear() const;

  /// Cumulative counters kept in `stats.json`.
  CacheCounters load_counters() const;
  void add_counters(const CacheCounters& delta) const;

 private:
  std::filesystem::path dir_;
};

enum class Provenance { MemoryHit, DiskHit, Miss };
std::string_view provenance_name(Provenance p) noexcept;

struct CompileResult {
  std::shared_ptr<const CompiledKernel> kernel;
  Provenance provenance = Provenance::Miss;
};

/// Wall time spent in the frontend and in lowering, summed over compiles.
struct CompileTiming {
  std::int64_t parse_ns = 0;
  std::int64_t lower_ns = 0;
};

struct QJITOptions {
  /// Defaults to default_cache_dir().
  std::optional<std::filesystem::path> cache_dir;
  bool use_disk = true;
};

/// Two-level compile cache. In memory, raw source plus the current digests of
/// its dependencies maps straight to the compiled kernel with no parsing. On a
/// memory miss the source is parsed and canonicalized, the canonical text is
/// kept by kernel name, the digest is formed from it and the dependency
/// digests, and the disk store is consulted before lowering.
class QJIT {
 public:
  explicit QJIT(QJITOptions opts = {});

  /// `dependencies` must already be compiled; references found in the source
  /// are added to them.
  CompileResult jit_compile(std::string_view source,
                            const std::vector<std::string>& dependencies = {});

  /// Compiles every kernel of a `.qk` file, dependencies first. Throws
  /// CyclicDependency when kernels of the file call each other in a cycle.
  std::vector<CompileResult> compile_file(std::string_view source);

  const KernelRegistry& registry() const { return registry_; }
  CacheCounters counters() const;
  CompileTiming timing() const;
  std::optional<std::string> rewritten_source(const std::string& name) const;
  std::vector<std::string> warnings() const;
  const DiskCache* disk() const { return disk_ ? &*disk_ : nullptr; }

 private:
  struct MemoryEntry {
    std::map<std::string, std::string> dep_digests;
    std::shared_ptr<const CompiledKernel> kernel;
  };

  std::optional<CompileResult> memory_lookup(const std::string& key);

  mutable std::mutex mutex_;
  KernelRegistry registry_;
  std::optional<DiskCache> disk_;
  std::multimap<std::string, MemoryEntry> memory_;
  std::map<std::string, std::string> rewritten_;
  CacheCounters counters_;
  CompileTiming timing_;
  std::vector<std::string> warnings_;
};

}  // namespace qk
