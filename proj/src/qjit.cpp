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

#include "qk/qjit.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qk/error.hpp"
#include "qk/parser.hpp"
#include "qk/printer.hpp"
#include "qk/serialize.hpp"

namespace qk {

namespace fs = std::filesystem;

CacheCounters& CacheCounters::operator+=(const CacheCounters& o) {
  parse += o.parse;
  lower += o.lower;
  memory_hits += o.memory_hits;
  disk_hits += o.disk_hits;
  misses += o.misses;
  return *this;
}

fs::path default_cache_dir() {
  if (const char* d = std::getenv("QK_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "qk";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "qk";
  return fs::temp_directory_path() / "qk-cache";
}

namespace {

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - since)
      .count();
}

constexpr std::string_view kRecordMagic = "QKCACHE\n";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_str(std::string& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

struct RecordReader {
  std::string_view in;
  std::size_t pos = 0;
  bool ok = true;

  std::uint64_t get(int bytes) {
    if (in.size() - pos < static_cast<std::size_t>(bytes)) {
      ok = false;
      return 0;
    }
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= std::uint64_t{static_cast<unsigned char>(in[pos++])} << (8 * i);
    }
    return v;
  }
  std::string_view bytes(std::uint64_t n) {
    if (!ok || in.size() - pos < n) {
      ok = false;
      return {};
    }
    auto s = in.substr(pos, n);
    pos += n;
    return s;
  }
  std::string_view str() { return bytes(get(4)); }
};

std::string encode_record(const CacheEntry& e) {
  std::string out(kRecordMagic);
  put_u32(out, e.format_version);
  put_str(out, kDigestScheme);
  put_u64(out, static_cast<std::uint64_t>(e.created_at));
  put_str(out, e.digest);
  put_u64(out, e.payload.size());
  out += e.payload;
  put_str(out, sha256_hex(e.payload));
  return out;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, std::string_view data) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

bool is_hex_digest(std::string_view d) {
  return d.size() == 64 && d.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

}  // namespace

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path DiskCache::path_for(std::string_view digest) const {
  if (!is_hex_digest(digest)) {
    throw Error(ErrorCode::IoError, "not a digest: '" + std::string(digest) + "'");
  }
  return dir_ / std::string(digest.substr(0, 2)) / std::string(digest.substr(2, 2)) /
         (std::string(digest) + ".qir");
}

void DiskCache::write(const CacheEntry& entry) const {
  write_atomic(path_for(entry.digest), encode_record(entry));
}

std::optional<CacheEntry> DiskCache::read(std::string_view digest,
                                          std::vector<std::string>* warnings) const {
  fs::path p = path_for(digest);
  auto data = read_file(p);
  if (!data) return std::nullopt;
  auto reject = [&](const std::string& why) -> std::optional<CacheEntry> {
    if (warnings) warnings->push_back("warning: ignoring cache entry " + p.string() + ": " + why);
    return std::nullopt;
  };
  RecordReader r{*data};
  if (r.bytes(kRecordMagic.size()) != kRecordMagic) return reject("bad magic");
  CacheEntry e;
  e.format_version = static_cast<std::uint32_t>(r.get(4));
  if (!r.ok) return reject("truncated header");
  if (e.format_version != kCacheFormatVersion) {
    return reject("format version " + std::to_string(e.format_version));
  }
  if (r.str() != kDigestScheme) return reject("different hash scheme");
  e.created_at = static_cast<std::int64_t>(r.get(8));
  e.digest = std::string(r.str());
  std::uint64_t len = r.get(8);
  e.payload = std::string(r.bytes(len));
  std::string checksum(r.str());
  if (!r.ok || r.pos != data->size()) return reject("truncated or oversized record");
  if (e.digest != digest) return reject("digest mismatch");
  if (checksum != sha256_hex(e.payload)) return reject("checksum mismatch");
  return e;
}

DiskCache::Stats DiskCache::stats() const {
  Stats s;
  std::error_code ec;
  if (!fs::exists(dir_, ec)) return s;
  for (auto it = fs::recursive_directory_iterator(dir_, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file(ec) && it->path().extension() == ".qir") {
      ++s.entries;
      s.bytes += it->file_size(ec);
    }
  }
  return s;
}

void DiskCache::clear() const {
  std::error_code ec;
  if (!fs::exists(dir_, ec)) return;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const auto name = entry.path().filename().string();
    bool fanout = entry.is_directory() && name.size() == 2 &&
                  name.find_first_not_of("0123456789abcdef") == std::string::npos;
    if (fanout) fs::remove_all(entry.path(), ec);
  }
  fs::remove(dir_ / "stats.json", ec);
}

CacheCounters DiskCache::load_counters() const {
  CacheCounters c;
  auto data = read_file(dir_ / "stats.json");
  if (!data) return c;
  try {
    auto j = nlohmann::json::parse(*data);
    c.parse = j.value("parse", std::uint64_t{0});
    c.lower = j.value("lower", std::uint64_t{0});
    c.memory_hits = j.value("memory_hits", std::uint64_t{0});
    c.disk_hits = j.value("disk_hits", std::uint64_t{0});
    c.misses = j.value("misses", std::uint64_t{0});
  } catch (const nlohmann::json::exception&) {
    return {};
  }
  return c;
}

void DiskCache::add_counters(const CacheCounters& delta) const {
  CacheCounters c = load_counters();
  c += delta;
  nlohmann::ordered_json j = {{"parse", c.parse},
                              {"lower", c.lower},
                              {"memory_hits", c.memory_hits},
                              {"disk_hits", c.disk_hits},
                              {"misses", c.misses}};
  write_atomic(dir_ / "stats.json", j.dump(2) + "\n");
}

std::string_view provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::MemoryHit: return "memory-hit";
    case Provenance::DiskHit: return "disk-hit";
    case Provenance::Miss: return "miss";
  }
  return "miss";
}

// ---------------------------------------------------------------------------

QJIT::QJIT(QJITOptions opts) {
  if (opts.use_disk) disk_.emplace(opts.cache_dir ? *opts.cache_dir : default_cache_dir());
}

CacheCounters QJIT::counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

CompileTiming QJIT::timing() const {
  std::lock_guard lock(mutex_);
  return timing_;
}

std::optional<std::string> QJIT::rewritten_source(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = rewritten_.find(name);
  if (it == rewritten_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> QJIT::warnings() const {
  std::lock_guard lock(mutex_);
  return warnings_;
}

std::optional<CompileResult> QJIT::memory_lookup(const std::string& key) {
  auto [lo, hi] = memory_.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    bool current = true;
    for (const auto& [dep, digest] : it->second.dep_digests) {
      auto k = registry_.find(dep);
      current = current && k && k->digest == digest;
    }
    if (!current) continue;
    // Re-bind in case the name was since rebound to another version.
    if (registry_.find(it->second.kernel->name) != it->second.kernel) {
      registry_.add(it->second.kernel);
    }
    return CompileResult{it->second.kernel, Provenance::MemoryHit};
  }
  return std::nullopt;
}

CompileResult QJIT::jit_compile(std::string_view source,
                                const std::vector<std::string>& dependencies) {
  std::lock_guard lock(mutex_);
  for (const auto& d : dependencies) registry_.get(d);

  const std::string key = sha256_hex(source);
  if (auto hit = memory_lookup(key)) {
    ++counters_.memory_hits;
    return *hit;
  }

  // Rewrite: parse and canonicalize, then keep the canonical text by name.
  ParseContext ctx;
  ctx.kernels = registry_.names();
  ctx.kernels.insert(dependencies.begin(), dependencies.end());
  ++counters_.parse;
  auto parse_start = std::chrono::steady_clock::now();
  KernelAST ast = parse_kernel_source(source, ctx);
  std::string canonical = print_kernel_source(ast);
  timing_.parse_ns += elapsed_ns(parse_start);
  rewritten_[ast.name] = canonical;

  // Inject dependencies and hash.
  std::set<std::string> deps = kernel_references(ast, registry_);
  for (const auto& d : dependencies) {
    if (d != ast.name) deps.insert(d);
  }
  std::map<std::string, std::string> dep_digests;
  std::vector<std::string> digests;
  for (const auto& d : deps) {
    dep_digests[d] = registry_.get(d)->digest;
    digests.push_back(dep_digests[d]);
  }
  const std::string digest = kernel_digest(canonical, digests);

  std::shared_ptr<const CompiledKernel> kernel;
  Provenance provenance = Provenance::Miss;
  if (disk_) {
    if (auto entry = disk_->read(digest, &warnings_)) {
      try {
        auto k = std::make_shared<CompiledKernel>(deserialize_kernel(entry->payload));
        if (k->digest == digest && k->name == ast.name && k->params == ast.params) {
          kernel = std::move(k);
          provenance = Provenance::DiskHit;
        } else {
          warnings_.push_back("warning: cache entry for " + digest + " does not match; recompiling");
        }
      } catch (const Error& e) {
        warnings_.push_back("warning: cache entry for " + digest + " is corrupt (" + e.what() +
                            "); recompiling");
      }
    }
  }

  if (!kernel) {
    ++counters_.lower;
    auto lower_start = std::chrono::steady_clock::now();
    auto k = std::make_shared<CompiledKernel>(lower(ast, registry_));
    timing_.lower_ns += elapsed_ns(lower_start);
    if (disk_) {
      try {
        CacheEntry entry;
        entry.digest = k->digest;
        entry.payload = serialize_kernel(*k);
        entry.created_at = std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
        disk_->write(entry);
      } catch (const Error& e) {
        warnings_.push_back(std::string("warning: could not store cache entry: ") + e.what());
      }
    }
    kernel = std::move(k);
  }

  if (provenance == Provenance::DiskHit) {
    ++counters_.disk_hits;
  } else {
    ++counters_.misses;
  }
  registry_.add(kernel);
  std::map<std::string, std::string> recorded;
  for (const auto& d : kernel->direct_dependencies) recorded[d] = registry_.get(d)->digest;
  memory_.emplace(key, MemoryEntry{std::move(recorded), kernel});
  return CompileResult{kernel, provenance};
}

std::vector<CompileResult> QJIT::compile_file(std::string_view source) {
  auto slices = split_kernels(source);
  std::map<std::string, const KernelSlice*> by_name;
  for (const auto& s : slices) {
    if (!by_name.emplace(s.name, &s).second) {
      throw Error(ErrorCode::SyntaxError, "kernel '" + s.name + "' is defined twice");
    }
  }
  std::map<std::string, std::set<std::string>> graph;
  for (const auto& s : slices) {
    auto& deps = graph[s.name];
    for (const auto& id : s.identifiers) {
      if (id != s.name && by_name.count(id)) deps.insert(id);
    }
  }
  std::vector<CompileResult> out;
  for (const auto& name : topo_sort(graph)) {
    const KernelSlice* s = by_name.at(name);
    const auto& deps = graph[name];
    out.push_back(jit_compile(s->source, std::vector<std::string>(deps.begin(), deps.end())));
  }
  return out;
}

}  // namespace qk
