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

#include "qk/compiler.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <functional>
#include <mutex>
#include <queue>
#include <sstream>

#include "qk/error.hpp"
#include "qk/gates.hpp"
#include "qk/printer.hpp"

namespace qk {

bool operator==(const ForOp& a, const ForOp& b) {
  return a.var == b.var && a.iterable == b.iterable && a.body == b.body;
}
bool operator==(const IfOp& a, const IfOp& b) {
  return a.branches == b.branches && a.else_body == b.else_body;
}
bool operator==(const ComputeActionOp& a, const ComputeActionOp& b) {
  return a.compute == b.compute && a.action == b.action;
}
bool operator==(const SynthesisOp& a, const SynthesisOp& b) {
  return a.qreg == b.qreg && a.method == b.method && a.matrix_var == b.matrix_var &&
         a.provider == b.provider;
}

namespace {

std::string join_exprs(const std::vector<Expr>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(args[i]);
  }
  return out;
}

std::string_view modifier_suffix(CallModifier m) {
  switch (m) {
    case CallModifier::Adjoint: return ".adjoint";
    case CallModifier::Ctrl: return ".ctrl";
    case CallModifier::None: break;
  }
  return "";
}

void dump_ops(const OpList& ops, int depth, std::string& out) {
  const std::string pad(2 * depth, ' ');
  for (const Op& op : ops) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, GateOp>) {
            std::vector<Expr> all = n.ctrl_args;
            all.insert(all.end(), n.args.begin(), n.args.end());
            out += pad + "gate " + n.name + std::string(modifier_suffix(n.modifier)) + "(" +
                   join_exprs(all) + ")" + (n.broadcast ? " broadcast" : "") + "\n";
          } else if constexpr (std::is_same_v<T, CallOp>) {
            std::vector<Expr> all = n.ctrl_args;
            all.insert(all.end(), n.args.begin(), n.args.end());
            out += pad + "call " + n.kernel + std::string(modifier_suffix(n.modifier)) + "(" +
                   join_exprs(all) + ")" + (n.via_param ? " via-param" : "") + "\n";
          } else if constexpr (std::is_same_v<T, BuiltinOp>) {
            out += pad + "builtin " + n.name + "(" + join_exprs(n.args) + ")\n";
          } else if constexpr (std::is_same_v<T, AssignOp>) {
            out += pad + (n.declares ? "let " : "set ") + n.target;
            if (!n.indices.empty()) out += "[" + join_exprs(n.indices) + "]";
            out += " = " + print_expr(n.value) + "\n";
          } else if constexpr (std::is_same_v<T, ForOp>) {
            out += pad + "for " + n.var + " in " + print_expr(n.iterable) + "\n";
            dump_ops(n.body, depth + 1, out);
          } else if constexpr (std::is_same_v<T, IfOp>) {
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
              out += pad + (i ? "elif " : "if ") + print_expr(n.branches[i].first) + "\n";
              dump_ops(n.branches[i].second, depth + 1, out);
            }
            if (!n.else_body.empty()) {
              out += pad + "else\n";
              dump_ops(n.else_body, depth + 1, out);
            }
          } else if constexpr (std::is_same_v<T, ComputeActionOp>) {
            out += pad + "compute\n";
            dump_ops(n.compute, depth + 1, out);
            out += pad + "action\n";
            dump_ops(n.action, depth + 1, out);
          } else if constexpr (std::is_same_v<T, SynthesisOp>) {
            out += pad + "synthesize " + n.matrix_var + " onto " + print_expr(n.qreg) + " method " +
                   std::string(synthesis_method_name(n.method)) + "\n";
            dump_ops(n.provider, depth + 1, out);
          } else if constexpr (std::is_same_v<T, PrintOp>) {
            out += pad + "print(" + join_exprs(n.args) + ")\n";
          }
        },
        op.node);
  }
}

}  // namespace

std::string dump_program(const Program& p) {
  std::string out;
  dump_ops(p.body, 0, out);
  return out;
}

std::vector<TypeAnnotation> CompiledKernel::signature() const {
  std::vector<TypeAnnotation> out;
  for (const Param& p : params) out.push_back(p.type);
  return out;
}

// ---------------------------------------------------------------------------
// Registry

KernelRegistry::KernelRegistry(const KernelRegistry& other) {
  std::shared_lock lock(other.mutex_);
  kernels_ = other.kernels_;
}

KernelRegistry& KernelRegistry::operator=(const KernelRegistry& other) {
  if (this == &other) return *this;
  std::map<std::string, std::shared_ptr<const CompiledKernel>, std::less<>> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.kernels_;
  }
  std::unique_lock lock(mutex_);
  kernels_ = std::move(copy);
  return *this;
}

void KernelRegistry::add(std::shared_ptr<const CompiledKernel> k) {
  std::unique_lock lock(mutex_);
  kernels_[k->name] = std::move(k);
}

std::shared_ptr<const CompiledKernel> KernelRegistry::find(std::string_view name) const {
  std::shared_lock lock(mutex_);
  auto it = kernels_.find(name);
  return it == kernels_.end() ? nullptr : it->second;
}

std::shared_ptr<const CompiledKernel> KernelRegistry::get(std::string_view name) const {
  auto k = find(name);
  if (!k) throw Error(ErrorCode::UnknownKernel, "kernel '" + std::string(name) + "' is not registered");
  return k;
}

bool KernelRegistry::contains(std::string_view name) const { return find(name) != nullptr; }

std::set<std::string> KernelRegistry::names() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> out;
  for (const auto& [name, k] : kernels_) out.insert(name);
  return out;
}

std::map<std::string, std::set<std::string>> KernelRegistry::graph() const {
  std::shared_lock lock(mutex_);
  std::map<std::string, std::set<std::string>> g;
  for (const auto& [name, k] : kernels_) {
    g[name] = std::set<std::string>(k->direct_dependencies.begin(), k->direct_dependencies.end());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Ordering

std::vector<std::string> topo_sort(const std::map<std::string, std::set<std::string>>& graph,
                                   const std::string* root) {
  auto deps_of = [&](const std::string& n) -> const std::set<std::string>& {
    static const std::set<std::string> none;
    auto it = graph.find(n);
    return it == graph.end() ? none : it->second;
  };

  std::set<std::string> nodes;
  if (root) {
    std::vector<std::string> stack{*root};
    while (!stack.empty()) {
      std::string n = stack.back();
      stack.pop_back();
      if (!nodes.insert(n).second) continue;
      for (const auto& d : deps_of(n)) stack.push_back(d);
    }
  } else {
    for (const auto& [n, ds] : graph) {
      nodes.insert(n);
      nodes.insert(ds.begin(), ds.end());
    }
  }

  std::map<std::string, int> pending;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& n : nodes) {
    pending[n] = static_cast<int>(deps_of(n).size());
    for (const auto& d : deps_of(n)) dependents[d].push_back(n);
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [n, c] : pending) {
    if (c == 0) ready.push(n);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string n = ready.top();
    ready.pop();
    order.push_back(n);
    for (const auto& m : dependents[n]) {
      if (--pending[m] == 0) ready.push(m);
    }
  }
  if (order.size() == nodes.size()) return order;

  // Walk unresolved nodes until one repeats; the repeated stretch is a cycle.
  std::string start;
  for (const auto& [n, c] : pending) {
    if (c > 0) {
      start = n;
      break;
    }
  }
  std::vector<std::string> path;
  std::string cur = start;
  while (std::find(path.begin(), path.end(), cur) == path.end()) {
    path.push_back(cur);
    for (const auto& d : deps_of(cur)) {
      if (pending[d] > 0) {
        cur = d;
        break;
      }
    }
  }
  auto first = std::find(path.begin(), path.end(), cur);
  std::vector<std::string> cycle(first, path.end());
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  std::string text;
  for (const auto& n : cycle) text += n + " -> ";
  text += cycle.front();
  throw Error(ErrorCode::CyclicDependency, "cycle " + text);
}

std::vector<std::string> topo_order(const KernelRegistry& registry, const std::string& root) {
  registry.get(root);
  return topo_sort(registry.graph(), &root);
}

// ---------------------------------------------------------------------------
// Digests

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::RuntimeError, "SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string kernel_digest(std::string_view canonical_source, std::vector<std::string> dep_digests) {
  std::sort(dep_digests.begin(), dep_digests.end());
  std::string buf(kDigestScheme);
  buf += '\0';
  buf += canonical_source;
  for (const auto& d : dep_digests) {
    buf += '\0';
    buf += d;
  }
  return sha256_hex(buf);
}

// ---------------------------------------------------------------------------
// Lowering

bool is_builtin_statement(std::string_view name) { return name == "exp_i_theta"; }

namespace {

const std::set<std::string, std::less<>>& builtin_names() {
  static const std::set<std::string, std::less<>> names = {
      "np",    "numpy", "math",  "range", "len",      "abs",          "int",  "float",
      "bool",  "min",   "max",   "round", "sqrt",     "sin",          "cos",  "tan",
      "exp",   "pi",    "eye",   "identity", "zeros", "ccnot_matrix", "complex", "exp_i_theta",
      "True",  "False"};
  return names;
}

[[noreturn]] void fail(ErrorCode code, const std::string& msg, int line) {
  throw Error(code, msg + (line > 0 ? " (line " + std::to_string(line) + ")" : ""));
}

class Lowerer {
 public:
  Lowerer(const KernelAST& ast, const KernelRegistry& reg) : ast_(ast), reg_(reg) {
    for (const Param& p : ast.params) {
      params_[p.name] = &p;
      if (p.type.kind == TypeKind::KernelSignature) kernel_params_[p.name] = &p;
    }
  }

  CompiledKernel run() {
    collect_assigned(ast_.body);
    CompiledKernel k;
    k.name = ast_.name;
    k.params = ast_.params;
    k.program.body = lower_block(ast_.body, false);
    k.source = print_kernel_source(ast_);
    deps_.merge(kernel_references(ast_, reg_));
    k.direct_dependencies.assign(deps_.begin(), deps_.end());

    std::vector<std::string> dep_digests;
    auto graph = reg_.graph();
    for (const auto& d : deps_) dep_digests.push_back(reg_.get(d)->digest);
    graph[k.name] = deps_;
    for (const auto& n : topo_sort(graph, &k.name)) {
      if (n != k.name) k.dependencies.push_back(n);
    }
    k.digest = kernel_digest(k.source, dep_digests);
    return k;
  }

 private:
  bool is_kernel_name(const std::string& n) const {
    return n == ast_.name || reg_.contains(n) || kernel_params_.count(n);
  }

  void note_assigned(const std::string& name, int line) {
    if (is_kernel_name(name) && !provider_vars_.count(name)) {
      fail(ErrorCode::ShadowedKernelName, "'" + name + "' names a kernel and cannot be assigned",
           line);
    }
    assigned_.insert(name);
  }

  void collect_assigned(const Block& block) {
    for (const Stmt& s : block) {
      if (auto a = s.as<Assign>()) note_assigned(a->target, s.line);
      if (auto f = s.as<For>()) {
        note_assigned(f->var, s.line);
        collect_assigned(f->body);
      }
      if (auto i = s.as<If>()) {
        for (const auto& b : i->branches) collect_assigned(b.body);
        collect_assigned(i->else_body);
      }
      if (auto c = s.as<WithCompute>()) collect_assigned(c->body);
      if (auto c = s.as<WithAction>()) collect_assigned(c->body);
      if (auto d = s.as<WithDecompose>()) {
        // The matrix variable is local to its block and may reuse a kernel name.
        bool fresh = provider_vars_.insert(d->matrix_var).second;
        note_assigned(d->matrix_var, s.line);
        collect_assigned(d->body);
        if (fresh) provider_vars_.erase(d->matrix_var);
      }
    }
  }

  void check_name(const std::string& name, int line) {
    if (params_.count(name) || assigned_.count(name) || builtin_names().count(name) ||
        find_gate(name)) {
      return;
    }
    if (name == ast_.name) {
      fail(ErrorCode::CyclicDependency, "kernel '" + name + "' refers to itself", line);
    }
    if (reg_.contains(name)) {
      deps_.insert(name);
      return;
    }
    fail(ErrorCode::UndefinedName, "name '" + name + "' is not defined", line);
  }

  void check_expr(const Expr& e, int line) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NameRef>) {
            check_name(n.name, line);
          } else if constexpr (std::is_same_v<T, Attribute>) {
            check_expr(*n.base, line);
          } else if constexpr (std::is_same_v<T, Call>) {
            check_expr(*n.callee, line);
            for (const auto& a : n.args) check_expr(a, line);
          } else if constexpr (std::is_same_v<T, Subscript>) {
            check_expr(*n.base, line);
            for (const auto& a : n.indices) check_expr(a, line);
          } else if constexpr (std::is_same_v<T, Slice>) {
            if (n.lower) check_expr(**n.lower, line);
            if (n.upper) check_expr(**n.upper, line);
          } else if constexpr (std::is_same_v<T, Unary>) {
            check_expr(*n.operand, line);
          } else if constexpr (std::is_same_v<T, Binary>) {
            check_expr(*n.lhs, line);
            check_expr(*n.rhs, line);
          } else if constexpr (std::is_same_v<T, ListLit>) {
            for (const auto& a : n.items) check_expr(a, line);
          }
        },
        e.node);
  }

  void check_exprs(const std::vector<Expr>& es, int line) {
    for (const auto& e : es) check_expr(e, line);
  }

  static bool is_literal_of_wrong_type(const Expr& e, TypeKind kind) {
    bool numeric = kind == TypeKind::Int || kind == TypeKind::Float || kind == TypeKind::Bool;
    if (e.as<StringLit>()) return kind != TypeKind::Pauli && kind != TypeKind::KernelSignature;
    if (e.as<IntLit>() || e.as<FloatLit>() || e.as<BoolLit>()) {
      if (kind == TypeKind::Int && e.as<FloatLit>()) return true;
      return !numeric;
    }
    return false;
  }

  void check_kernel_args(const std::string& name, const std::vector<TypeKind>& sig,
                         const std::vector<Expr>& args, int line) {
    if (args.size() != sig.size()) {
      fail(ErrorCode::ArityError,
           "kernel '" + name + "' takes " + std::to_string(sig.size()) + " arguments, got " +
               std::to_string(args.size()),
           line);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (is_literal_of_wrong_type(args[i], sig[i])) {
        fail(ErrorCode::TypeMismatch,
             "argument " + std::to_string(i + 1) + " of '" + name + "' expects " +
                 std::string(type_kind_name(sig[i])),
             line);
      }
    }
  }

  void check_ctrl_args(const std::vector<Expr>& ctrl, CallModifier m, const std::string& name,
                       int line) {
    if (m == CallModifier::Ctrl && ctrl.size() != 1) {
      fail(ErrorCode::ArityError, "'" + name + ".ctrl' needs a control argument", line);
    }
  }

  Op lower_kernel_call(const std::string& name, CallModifier modifier,
                       const std::vector<Expr>& ctrl_args, const std::vector<Expr>& args,
                       int line) {
    if (name == ast_.name) {
      fail(ErrorCode::CyclicDependency, "kernel '" + name + "' calls itself", line);
    }
    check_ctrl_args(ctrl_args, modifier, name, line);
    check_exprs(ctrl_args, line);
    check_exprs(args, line);
    CallOp op{name, modifier, ctrl_args, args, false};
    if (auto it = kernel_params_.find(name); it != kernel_params_.end()) {
      op.via_param = true;
      check_kernel_args(name, it->second->type.signature, args, line);
    } else {
      auto k = reg_.get(name);
      std::vector<TypeKind> sig;
      for (const auto& p : k->params) sig.push_back(p.type.kind);
      check_kernel_args(name, sig, args, line);
      deps_.insert(name);
    }
    return Op{std::move(op), line};
  }

  static bool measures(const Block& block) {
    for (const Stmt& s : block) {
      if (auto g = s.as<GateCall>()) {
        if (g->name == "Measure" || g->name == "Reset") return true;
      }
      if (auto a = s.as<Assign>()) {
        if (auto c = a->value.as<Call>()) {
          if (callee_name(*c->callee) == "Measure" || callee_name(*c->callee) == "Mz") return true;
        }
      }
      if (auto f = s.as<For>()) {
        if (measures(f->body)) return true;
      }
      if (auto i = s.as<If>()) {
        for (const auto& b : i->branches) {
          if (measures(b.body)) return true;
        }
        if (measures(i->else_body)) return true;
      }
    }
    return false;
  }

  OpList lower_block(const Block& block, bool in_provider) {
    OpList out;
    for (std::size_t idx = 0; idx < block.size(); ++idx) {
      const Stmt& s = block[idx];
      const int line = s.line;
      auto quantum_in_provider = [&] {
        if (in_provider) {
          fail(ErrorCode::TypeMismatch, "quantum operations are not allowed in a decompose block",
               line);
        }
      };
      if (auto g = s.as<GateCall>()) {
        quantum_in_provider();
        const GateInfo* info = find_gate(g->name);
        if (!info) fail(ErrorCode::UnknownGate, "unknown gate '" + g->name + "'", line);
        check_ctrl_args(g->ctrl_args, g->modifier, g->name, line);
        std::size_t want = g->broadcast ? 1 + info->num_params
                                        : static_cast<std::size_t>(info->num_targets + info->num_params);
        if (g->args.size() != want) {
          fail(ErrorCode::ArityError,
               "gate '" + g->name + "' takes " + std::to_string(want) + " arguments, got " +
                   std::to_string(g->args.size()),
               line);
        }
        if (g->modifier != CallModifier::None && !info->unitary) {
          fail(ErrorCode::NonUnitaryGate, "'" + g->name + "' has no adjoint or controlled form", line);
        }
        check_exprs(g->ctrl_args, line);
        check_exprs(g->args, line);
        out.push_back(Op{GateOp{g->name, g->modifier, g->ctrl_args, g->args, g->broadcast}, line});
      } else if (auto k = s.as<KernelCall>()) {
        quantum_in_provider();
        out.push_back(lower_kernel_call(k->name, k->modifier, k->ctrl_args, k->args, line));
      } else if (auto c = s.as<ClassicalCall>()) {
        if (is_kernel_name(c->name)) {
          quantum_in_provider();
          out.push_back(lower_kernel_call(c->name, CallModifier::None, {}, c->args, line));
        } else if (is_builtin_statement(c->name)) {
          quantum_in_provider();
          if (c->args.size() != 3) {
            fail(ErrorCode::ArityError, "exp_i_theta takes (qreg, theta, operator)", line);
          }
          check_exprs(c->args, line);
          out.push_back(Op{BuiltinOp{c->name, c->args}, line});
        } else {
          fail(ErrorCode::UnknownKernel, "unknown kernel or function '" + c->name + "'", line);
        }
      } else if (auto a = s.as<Assign>()) {
        check_exprs(a->indices, line);
        check_expr(a->value, line);
        bool declares = declared_.insert(a->target).second && !params_.count(a->target);
        out.push_back(Op{AssignOp{a->target, a->indices, a->value, declares}, line});
      } else if (auto f = s.as<For>()) {
        check_expr(f->iterable, line);
        declared_.insert(f->var);
        out.push_back(Op{ForOp{f->var, f->iterable, lower_block(f->body, in_provider)}, line});
      } else if (auto i = s.as<If>()) {
        IfOp op;
        for (const auto& b : i->branches) {
          check_expr(b.condition, line);
          op.branches.emplace_back(b.condition, lower_block(b.body, in_provider));
        }
        op.else_body = lower_block(i->else_body, in_provider);
        out.push_back(Op{std::move(op), line});
      } else if (auto wc = s.as<WithCompute>()) {
        quantum_in_provider();
        const WithAction* action =
            idx + 1 < block.size() ? block[idx + 1].as<WithAction>() : nullptr;
        if (!action) {
          fail(ErrorCode::ComputeWithoutAction, "compute block must be followed by an action block",
               line);
        }
        if (measures(wc->body)) {
          fail(ErrorCode::MeasureInComputeBlock, "compute block must be unitary", line);
        }
        ComputeActionOp op{lower_block(wc->body, false), lower_block(action->body, false)};
        out.push_back(Op{std::move(op), line});
        ++idx;
      } else if (s.as<WithAction>()) {
        fail(ErrorCode::ComputeWithoutAction, "action block without a preceding compute block",
             line);
      } else if (auto d = s.as<WithDecompose>()) {
        quantum_in_provider();
        SynthesisMethod method = SynthesisMethod::Default;
        if (d->method) {
          auto m = parse_synthesis_method(*d->method);
          if (!m) {
            fail(ErrorCode::UnknownSynthesisMethod, "unknown synthesis method '" + *d->method + "'",
                 line);
          }
          method = *m;
        }
        check_expr(d->qreg, line);
        declared_.insert(d->matrix_var);
        out.push_back(
            Op{SynthesisOp{d->qreg, method, d->matrix_var, lower_block(d->body, true)}, line});
      } else if (auto p = s.as<Print>()) {
        check_exprs(p->args, line);
        out.push_back(Op{PrintOp{p->args}, line});
      }
    }
    return out;
  }

  const KernelAST& ast_;
  const KernelRegistry& reg_;
  std::map<std::string, const Param*> params_;
  std::map<std::string, const Param*> kernel_params_;
  std::set<std::string> assigned_;
  std::set<std::string> provider_vars_;
  std::set<std::string> declared_;
  std::set<std::string> deps_;
};

}  // namespace

std::set<std::string> kernel_references(const KernelAST& ast, const KernelRegistry& registry) {
  std::set<std::string> bound;
  for (const Param& p : ast.params) bound.insert(p.name);
  std::set<std::string> out;
  auto note = [&](const std::string& name) {
    if (name != ast.name && !bound.count(name) && registry.contains(name)) out.insert(name);
  };
  std::function<void(const Expr&)> expr = [&](const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NameRef>) {
            note(n.name);
          } else if constexpr (std::is_same_v<T, Attribute>) {
            expr(*n.base);
          } else if constexpr (std::is_same_v<T, Call>) {
            expr(*n.callee);
            for (const auto& a : n.args) expr(a);
          } else if constexpr (std::is_same_v<T, Subscript>) {
            expr(*n.base);
            for (const auto& a : n.indices) expr(a);
          } else if constexpr (std::is_same_v<T, Slice>) {
            if (n.lower) expr(**n.lower);
            if (n.upper) expr(**n.upper);
          } else if constexpr (std::is_same_v<T, Unary>) {
            expr(*n.operand);
          } else if constexpr (std::is_same_v<T, Binary>) {
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, ListLit>) {
            for (const auto& a : n.items) expr(a);
          }
        },
        e.node);
  };
  auto exprs = [&](const std::vector<Expr>& es) {
    for (const auto& e : es) expr(e);
  };
  std::function<void(const Block&)> block = [&](const Block& b) {
    for (const Stmt& s : b) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateCall>) {
              exprs(n.ctrl_args);
              exprs(n.args);
            } else if constexpr (std::is_same_v<T, KernelCall>) {
              note(n.name);
              exprs(n.ctrl_args);
              exprs(n.args);
            } else if constexpr (std::is_same_v<T, ClassicalCall>) {
              note(n.name);
              exprs(n.args);
            } else if constexpr (std::is_same_v<T, Assign>) {
              exprs(n.indices);
              expr(n.value);
            } else if constexpr (std::is_same_v<T, For>) {
              expr(n.iterable);
              block(n.body);
            } else if constexpr (std::is_same_v<T, If>) {
              for (const auto& br : n.branches) {
                expr(br.condition);
                block(br.body);
              }
              block(n.else_body);
            } else if constexpr (std::is_same_v<T, WithCompute> || std::is_same_v<T, WithAction>) {
              block(n.body);
            } else if constexpr (std::is_same_v<T, WithDecompose>) {
              expr(n.qreg);
              block(n.body);
            } else if constexpr (std::is_same_v<T, Print>) {
              exprs(n.args);
            }
          },
          s.node);
    }
  };
  block(ast.body);
  return out;
}

CompiledKernel lower(const KernelAST& ast, const KernelRegistry& registry) {
  return Lowerer(ast, registry).run();
}

}  // namespace qk
