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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qk/compiler.hpp"
#include "qk/interpreter.hpp"
#include "qk/ir.hpp"
#include "qk/pauli.hpp"

namespace qk {

struct QRegArg {
  int size = 1;
  friend bool operator==(const QRegArg&, const QRegArg&) = default;
};
struct KernelRef {
  std::string name;
  friend bool operator==(const KernelRef&, const KernelRef&) = default;
};
/// By-reference argument; the cell holds the value read back after a run.
struct RefArg {
  std::shared_ptr<CValue> cell = std::make_shared<CValue>(std::int64_t{0});
};

struct ArgValue;
using ArgList = std::vector<ArgValue>;

struct ArgValue {
  std::variant<QRegArg, bool, std::int64_t, double, std::string, ArgList, PauliOperator, KernelRef,
               RefArg, Matrix>
      v;

  ArgValue() = default;
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, ArgValue>)
  ArgValue(T x) : v(std::move(x)) {}
  ArgValue(int x) : v(std::int64_t{x}) {}
  ArgValue(const char* s) : v(std::string(s)) {}
};

/// Heterogeneous name-to-value argument map; keeps insertion order.
class ArgPack {
 public:
  ArgPack() = default;
  ArgPack(std::initializer_list<std::pair<std::string, ArgValue>> items);

  /// Inserts or replaces.
  ArgPack& set(const std::string& name, ArgValue value);
  const ArgValue* find(std::string_view name) const;
  const std::vector<std::pair<std::string, ArgValue>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<std::pair<std::string, ArgValue>> items_;
};

/// JSON object: `{"size": n}` for a register, numbers, booleans, strings (kernel
/// names or Pauli text, resolved against the signature), `{"kernel": name}`,
/// `{"ref": value}`, `{"pauli": text}`, `{"matrix": [[re | [re, im], ...], ...]}`,
/// and arrays. Throws TypeMismatch on unsupported shapes.
ArgPack argpack_from_json(std::string_view text);
std::string argpack_to_json(const ArgPack& pack);

struct BoundArgs {
  std::vector<Value> values;
  int qreg_size = 0;
  std::string qreg_name;
  /// Ref-cell parameters by name, shared with the running kernel.
  std::map<std::string, std::shared_ptr<Value>> refs;
};

/// Matches the pack to the signature by name. Throws ArityError for missing
/// or extra entries, TypeMismatch, and UnboundKernelReference.
BoundArgs bind_args(const CompiledKernel& k, const ArgPack& pack, const KernelRegistry& registry);

/// Current values of every ref cell.
std::map<std::string, CValue> collect_byref(const BoundArgs& bound);

/// Copies ref-cell values into the register results and into the caller's
/// RefArg cells.
void persist_byref(QReg& q, const std::map<std::string, CValue>& slots);
void write_back(const ArgPack& pack, const std::map<std::string, CValue>& slots);

}  // namespace qk
