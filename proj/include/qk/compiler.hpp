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

#include <map>
#include <memory>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qk/ast.hpp"
#include "qk/synthesis.hpp"

namespace qk {

// ---------------------------------------------------------------------------
// Lowered program. Loops and conditionals stay as nodes; calls are resolved
// against the registry and decompose blocks carry their matrix provider.

struct Op;
using OpList = std::vector<Op>;

struct GateOp {
  std::string name;
  CallModifier modifier = CallModifier::None;
  std::vector<Expr> ctrl_args;
  std::vector<Expr> args;
  bool broadcast = false;
  friend bool operator==(const GateOp&, const GateOp&) = default;
};

struct CallOp {
  std::string kernel;
  CallModifier modifier = CallModifier::None;
  std::vector<Expr> ctrl_args;
  std::vector<Expr> args;
  /// `kernel` names a KernelSignature parameter rather than a registered kernel.
  bool via_param = false;
  friend bool operator==(const CallOp&, const CallOp&) = default;
};

/// Statement-level call of a runtime builtin such as exp_i_theta.
struct BuiltinOp {
  std::string name;
  std::vector<Expr> args;
  friend bool operator==(const BuiltinOp&, const BuiltinOp&) = default;
};

struct AssignOp {
  std::string target;
  std::vector<Expr> indices;
  Expr value;
  /// First assignment of `target` in source order.
  bool declares = false;
  friend bool operator==(const AssignOp&, const AssignOp&) = default;
};

struct ForOp {
  std::string var;
  Expr iterable;
  OpList body;
  friend bool operator==(const ForOp&, const ForOp&);
};

struct IfOp {
  std::vector<std::pair<Expr, OpList>> branches;
  OpList else_body;
  friend bool operator==(const IfOp&, const IfOp&);
};

struct ComputeActionOp {
  OpList compute;
  OpList action;
  friend bool operator==(const ComputeActionOp&, const ComputeActionOp&);
};

/// Placeholder for a decompose block: `provider` builds `matrix_var`, which is
/// synthesized onto `qreg` at execution time.
struct SynthesisOp {
  Expr qreg;
  SynthesisMethod method = SynthesisMethod::Default;
  std::string matrix_var;
  OpList provider;
  friend bool operator==(const SynthesisOp&, const SynthesisOp&);
};

struct PrintOp {
  std::vector<Expr> args;
  friend bool operator==(const PrintOp&, const PrintOp&) = default;
};

struct Op {
  std::variant<GateOp, CallOp, BuiltinOp, AssignOp, ForOp, IfOp, ComputeActionOp, SynthesisOp,
               PrintOp>
      node;
  int line = 0;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  friend bool operator==(const Op& a, const Op& b) { return a.node == b.node; }
};

struct Program {
  OpList body;
  friend bool operator==(const Program&, const Program&) = default;
};

/// Compact indented listing of a program, for diagnostics and tests.
std::string dump_program(const Program& p);

// ---------------------------------------------------------------------------

struct CompiledKernel {
  std::string name;
  std::vector<Param> params;
  /// Lowercase hex SHA-256, 64 characters.
  std::string digest;
  /// Every kernel this one reaches, dependencies first, excluding itself.
  std::vector<std::string> dependencies;
  /// Registered kernels called directly, sorted.
  std::vector<std::string> direct_dependencies;
  Program program;
  /// Canonical pretty-printed source; this is what the digest covers.
  std::string source;

  std::vector<TypeAnnotation> signature() const;
  friend bool operator==(const CompiledKernel&, const CompiledKernel&) = default;
};

/// Name to kernel map. Reads are concurrent; registration takes the writer
/// lock. Registering a name again rebinds it and leaves the old kernel object
/// untouched for anyone still holding it.
class KernelRegistry {
 public:
  KernelRegistry() = default;
  KernelRegistry(const KernelRegistry& other);
  KernelRegistry& operator=(const KernelRegistry& other);

  void add(std::shared_ptr<const CompiledKernel> k);
  std::shared_ptr<const CompiledKernel> find(std::string_view name) const;
  /// Throws UnknownKernel.
  std::shared_ptr<const CompiledKernel> get(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::set<std::string> names() const;
  std::map<std::string, std::set<std::string>> graph() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const CompiledKernel>, std::less<>> kernels_;
};

/// Dependencies before dependents, ties broken alphabetically. `graph` maps a
/// node to the nodes it depends on. With a root, only nodes reachable from it
/// are ordered. Throws CyclicDependency naming the cycle.
std::vector<std::string> topo_sort(const std::map<std::string, std::set<std::string>>& graph,
                                   const std::string* root = nullptr);
std::vector<std::string> topo_order(const KernelRegistry& registry, const std::string& root);

std::string sha256_hex(std::string_view data);

/// Hash identifier mixed into every digest.
inline constexpr std::string_view kDigestScheme = "qk-ir-1/sha256";

/// SHA-256 over scheme, canonical source and the sorted dependency digests,
/// NUL separated.
std::string kernel_digest(std::string_view canonical_source, std::vector<std::string> dep_digests);

/// Registered kernels the AST names anywhere (calls, modifiers, kernel-valued
/// arguments), excluding itself and names bound by its parameters.
std::set<std::string> kernel_references(const KernelAST& ast, const KernelRegistry& registry);

/// Throws UnknownKernel, CyclicDependency, ArityError, TypeMismatch,
/// UndefinedName, ShadowedKernelName, ComputeWithoutAction,
/// MeasureInComputeBlock, UnknownSynthesisMethod.
CompiledKernel lower(const KernelAST& ast, const KernelRegistry& registry);

/// Runtime builtins callable as statements.
bool is_builtin_statement(std::string_view name);

}  // namespace qk
