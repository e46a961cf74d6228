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

#include "qk/interpreter.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "qk/error.hpp"
#include "qk/gates.hpp"
#include "qk/printer.hpp"
#include "qk/synthesis.hpp"
#include "qk/transforms.hpp"
#include "qk/trotter.hpp"

namespace qk {

namespace {

[[noreturn]] void type_error(const std::string& msg) { throw Error(ErrorCode::TypeMismatch, msg); }

[[noreturn]] void dynamic_error(const std::string& what) {
  throw Error(ErrorCode::DynamicControlFlowInCircuitMode,
              what + " depends on a measurement result; run in ftqc mode");
}

bool is_number(const Value& v) {
  return v.as<bool>() || v.as<std::int64_t>() || v.as<double>() || v.as<Complex>();
}

Matrix list_to_matrix(const ValueList& rows);

}  // namespace

Value make_list(ValueList items) { return Value(std::make_shared<ValueList>(std::move(items))); }

std::string value_type_name(const Value& v) {
  static const char* names[] = {"None",  "bool",      "int",   "float",   "complex",
                                "str",   "qubit",     "qreg",  "list",    "PauliOperator",
                                "kernel", "matrix",   "measurement result", "reference"};
  return names[v.v.index()];
}

std::string format_value(const Value& v) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "None";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_float(x);
        } else if constexpr (std::is_same_v<T, Complex>) {
          return "(" + format_complex(x) + ")";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, QubitRef>) {
          return "q[" + std::to_string(x.index) + "]";
        } else if constexpr (std::is_same_v<T, QRegView>) {
          return "qreg[" + std::to_string(x.qubits.size()) + "]";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<ValueList>>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x->size(); ++i) {
            if (i) out += ", ";
            const Value& item = (*x)[i];
            out += item.as<std::string>() ? "'" + *item.as<std::string>() + "'" : format_value(item);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, PauliOperator>) {
          return x.to_string();
        } else if constexpr (std::is_same_v<T, KernelHandle>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Matrix>) {
          return format_matrix_text(x);
        } else if constexpr (std::is_same_v<T, DynamicValue>) {
          return to_string(x.expr);
        } else {
          return format_value(*x.cell);
        }
      },
      v.v);
}

Value coerce_to(const Value& v, const TypeAnnotation& type, const KernelRegistry& registry,
                const std::string& what) {
  auto mismatch = [&]() -> Value {
    type_error(what + " expects " + type_to_string(type) + ", got " + value_type_name(v));
  };
  auto element = [&](TypeKind k) {
    TypeAnnotation t;
    t.kind = k;
    return t;
  };
  if (auto r = v.as<RefCell>(); r && !type.is_ref()) return coerce_to(*r->cell, type, registry, what);
  switch (type.kind) {
    case TypeKind::Qreg:
      if (v.as<QRegView>()) return v;
      if (auto q = v.as<QubitRef>()) return QRegView{{q->index}};
      return mismatch();
    case TypeKind::Qubit:
      if (v.as<QubitRef>()) return v;
      if (auto r = v.as<QRegView>(); r && r->qubits.size() == 1) return QubitRef{r->qubits[0]};
      return mismatch();
    case TypeKind::Int:
      if (v.as<std::int64_t>() || v.as<DynamicValue>()) return v;
      if (auto b = v.as<bool>()) return std::int64_t{*b};
      return mismatch();
    case TypeKind::Float:
      if (v.as<double>() || v.as<DynamicValue>()) return v;
      if (auto i = v.as<std::int64_t>()) return static_cast<double>(*i);
      if (auto b = v.as<bool>()) return *b ? 1.0 : 0.0;
      return mismatch();
    case TypeKind::Bool:
      if (v.as<bool>() || v.as<DynamicValue>()) return v;
      return mismatch();
    case TypeKind::ListFloat:
    case TypeKind::ListInt:
    case TypeKind::ListPauli: {
      auto l = v.as<std::shared_ptr<ValueList>>();
      if (!l) return mismatch();
      TypeKind ek = type.kind == TypeKind::ListFloat ? TypeKind::Float
                    : type.kind == TypeKind::ListInt ? TypeKind::Int
                                                     : TypeKind::Pauli;
      ValueList out;
      for (std::size_t i = 0; i < (*l)->size(); ++i) {
        out.push_back(coerce_to((**l)[i], element(ek), registry,
                                what + " element " + std::to_string(i)));
      }
      return make_list(std::move(out));
    }
    case TypeKind::Pauli:
      if (v.as<PauliOperator>()) return v;
      if (auto s = v.as<std::string>()) return parse_pauli(*s);
      return mismatch();
    case TypeKind::KernelSignature: {
      std::string name;
      if (auto h = v.as<KernelHandle>()) {
        name = h->name;
      } else if (auto s = v.as<std::string>()) {
        name = *s;
      } else {
        return mismatch();
      }
      auto k = registry.find(name);
      if (!k) {
        throw Error(ErrorCode::UnboundKernelReference,
                    what + " refers to kernel '" + name + "', which is not registered");
      }
      std::vector<TypeKind> sig;
      for (const auto& p : k->params) sig.push_back(p.type.kind);
      if (sig != type.signature) {
        TypeAnnotation got;
        got.kind = TypeKind::KernelSignature;
        got.signature = sig;
        type_error(what + " expects " + type_to_string(type) + ", kernel '" + name + "' is " +
                   type_to_string(got));
      }
      return KernelHandle{name};
    }
    case TypeKind::IntRef:
    case TypeKind::FloatRef:
    case TypeKind::BoolRef: {
      TypeKind inner = type.kind == TypeKind::IntRef     ? TypeKind::Int
                       : type.kind == TypeKind::FloatRef ? TypeKind::Float
                                                         : TypeKind::Bool;
      if (auto r = v.as<RefCell>()) {
        *r->cell = coerce_to(*r->cell, element(inner), registry, what);
        return v;
      }
      return RefCell{std::make_shared<Value>(coerce_to(v, element(inner), registry, what))};
    }
    case TypeKind::Matrix:
      if (v.as<Matrix>()) return v;
      if (auto l = v.as<std::shared_ptr<ValueList>>()) return list_to_matrix(**l);
      return mismatch();
  }
  return mismatch();
}

namespace {

Complex to_complex(const Value& v, const std::string& what) {
  if (auto b = v.as<bool>()) return *b ? 1.0 : 0.0;
  if (auto i = v.as<std::int64_t>()) return static_cast<double>(*i);
  if (auto d = v.as<double>()) return *d;
  if (auto c = v.as<Complex>()) return *c;
  if (v.as<DynamicValue>()) dynamic_error(what);
  type_error(what + " must be a number, got " + value_type_name(v));
}

double to_double(const Value& v, const std::string& what) {
  if (auto b = v.as<bool>()) return *b ? 1.0 : 0.0;
  if (auto i = v.as<std::int64_t>()) return static_cast<double>(*i);
  if (auto d = v.as<double>()) return *d;
  if (v.as<DynamicValue>()) dynamic_error(what);
  type_error(what + " must be a real number, got " + value_type_name(v));
}

std::int64_t to_int(const Value& v, const std::string& what) {
  if (auto b = v.as<bool>()) return *b;
  if (auto i = v.as<std::int64_t>()) return *i;
  if (v.as<DynamicValue>()) dynamic_error(what);
  type_error(what + " must be an integer, got " + value_type_name(v));
}

Matrix list_to_matrix(const ValueList& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto row = rows[i].as<std::shared_ptr<ValueList>>();
    if (!row || static_cast<Eigen::Index>((*row)->size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix literal must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = to_complex((**row)[j], "matrix entry");
  }
  return m;
}

std::optional<ClassicalExpr> to_classical(const Value& v) {
  if (auto b = v.as<bool>()) return ClassicalExpr::constant(*b);
  if (auto i = v.as<std::int64_t>()) return ClassicalExpr::constant(*i);
  if (auto d = v.as<double>()) return ClassicalExpr::constant(*d);
  if (auto d = v.as<DynamicValue>()) return d->expr;
  return std::nullopt;
}

std::vector<int> qubits_of(const Value& v, const std::string& what) {
  if (auto q = v.as<QubitRef>()) return {q->index};
  if (auto r = v.as<QRegView>()) return r->qubits;
  type_error(what + " must be a qubit or register, got " + value_type_name(v));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t py_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

int rank(const Value& v) {
  if (v.as<Complex>()) return 2;
  if (v.as<double>()) return 1;
  return 0;
}

bool is_comparison(BinaryOp op) {
  return op == BinaryOp::Eq || op == BinaryOp::Ne || op == BinaryOp::Lt || op == BinaryOp::Le ||
         op == BinaryOp::Gt || op == BinaryOp::Ge;
}

template <class T>
bool compare(BinaryOp op, T a, T b) {
  switch (op) {
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
    default: return false;
  }
}

[[noreturn]] void zero_division() { throw Error(ErrorCode::RuntimeError, "division by zero"); }

Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
  const std::string sym(binary_op_text(op));
  auto unsupported = [&]() -> Value {
    type_error("unsupported operand types for " + sym + ": " + value_type_name(a) + " and " +
               value_type_name(b));
  };

  if (a.as<DynamicValue>() || b.as<DynamicValue>()) {
    auto ca = to_classical(a);
    auto cb = to_classical(b);
    if (!ca || !cb) return unsupported();
    return DynamicValue{ClassicalExpr::binary(op, *ca, *cb)};
  }

  if (a.as<PauliOperator>() || b.as<PauliOperator>()) {
    auto as_op = [&](const Value& v) -> std::optional<PauliOperator> {
      if (auto p = v.as<PauliOperator>()) return *p;
      if (is_number(v)) return PauliOperator::identity(to_complex(v, "operand"));
      return std::nullopt;
    };
    auto pa = as_op(a);
    auto pb = as_op(b);
    if (!pa || !pb) return unsupported();
    switch (op) {
      case BinaryOp::Add: return *pa + *pb;
      case BinaryOp::Sub: return *pa - *pb;
      case BinaryOp::Mul: return *pa * *pb;
      case BinaryOp::Div:
        if (!is_number(b)) return unsupported();
        if (to_complex(b, "divisor") == Complex(0.0)) zero_division();
        return *pa * (1.0 / to_complex(b, "divisor"));
      case BinaryOp::Eq: return pa->approx_equal(*pb);
      case BinaryOp::Ne: return !pa->approx_equal(*pb);
      default: return unsupported();
    }
  }

  if (a.as<Matrix>() || b.as<Matrix>()) {
    if (a.as<Matrix>() && b.as<Matrix>()) {
      const Matrix& x = *a.as<Matrix>();
      const Matrix& y = *b.as<Matrix>();
      if (op == BinaryOp::Mul) {
        if (x.cols() != y.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
        return Matrix(x * y);
      }
      if (op == BinaryOp::Add || op == BinaryOp::Sub) {
        if (x.rows() != y.rows() || x.cols() != y.cols()) {
          throw Error(ErrorCode::DimensionMismatch, "matrix sum");
        }
        return Matrix(op == BinaryOp::Add ? Matrix(x + y) : Matrix(x - y));
      }
      return unsupported();
    }
    if (op == BinaryOp::Mul) {
      const Matrix& m = a.as<Matrix>() ? *a.as<Matrix>() : *b.as<Matrix>();
      const Value& s = a.as<Matrix>() ? b : a;
      if (!is_number(s)) return unsupported();
      return Matrix(m * to_complex(s, "scale"));
    }
    return unsupported();
  }

  if (auto sa = a.as<std::string>()) {
    auto sb = b.as<std::string>();
    if (!sb) return unsupported();
    if (op == BinaryOp::Add) return *sa + *sb;
    if (is_comparison(op)) return compare(op, *sa, *sb);
    return unsupported();
  }

  if (auto la = a.as<std::shared_ptr<ValueList>>()) {
    auto lb = b.as<std::shared_ptr<ValueList>>();
    if (!lb || op != BinaryOp::Add) return unsupported();
    ValueList out = **la;
    out.insert(out.end(), (*lb)->begin(), (*lb)->end());
    return make_list(std::move(out));
  }

  if (!is_number(a) || !is_number(b)) return unsupported();
  const int r = std::max(rank(a), rank(b));

  if (r == 2) {
    Complex x = to_complex(a, "operand"), y = to_complex(b, "operand");
    switch (op) {
      case BinaryOp::Add: return x + y;
      case BinaryOp::Sub: return x - y;
      case BinaryOp::Mul: return x * y;
      case BinaryOp::Div:
        if (y == Complex(0.0)) zero_division();
        return x / y;
      case BinaryOp::Pow: return std::pow(x, y);
      case BinaryOp::Eq: return x == y;
      case BinaryOp::Ne: return x != y;
      default: return unsupported();
    }
  }

  if (r == 1) {
    double x = to_double(a, "operand"), y = to_double(b, "operand");
    switch (op) {
      case BinaryOp::Add: return x + y;
      case BinaryOp::Sub: return x - y;
      case BinaryOp::Mul: return x * y;
      case BinaryOp::Div:
        if (y == 0.0) zero_division();
        return x / y;
      case BinaryOp::FloorDiv:
        if (y == 0.0) zero_division();
        return std::floor(x / y);
      case BinaryOp::Mod: {
        if (y == 0.0) zero_division();
        double m = std::fmod(x, y);
        if (m != 0.0 && ((m < 0) != (y < 0))) m += y;
        return m;
      }
      case BinaryOp::Pow: return std::pow(x, y);
      default:
        if (is_comparison(op)) return compare(op, x, y);
        return unsupported();
    }
  }

  std::int64_t x = to_int(a, "operand"), y = to_int(b, "operand");
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    case BinaryOp::Div:
      if (y == 0) zero_division();
      return static_cast<double>(x) / static_cast<double>(y);
    case BinaryOp::FloorDiv:
      if (y == 0) zero_division();
      return floor_div(x, y);
    case BinaryOp::Mod:
      if (y == 0) zero_division();
      return py_mod(x, y);
    case BinaryOp::Pow: {
      if (y < 0) return std::pow(static_cast<double>(x), static_cast<double>(y));
      std::int64_t p = 1;
      for (std::int64_t i = 0; i < y; ++i) p *= x;
      return p;
    }
    default:
      if (is_comparison(op)) return compare(op, x, y);
      return unsupported();
  }
}

/// Python-style index normalization.
std::size_t normalize_index(std::int64_t i, std::size_t n, const std::string& what) {
  std::int64_t size = static_cast<std::int64_t>(n);
  if (i < 0) i += size;
  if (i < 0 || i >= size) {
    throw Error(ErrorCode::IndexOutOfRange,
                what + " index " + std::to_string(i) + " out of range for size " + std::to_string(n));
  }
  return static_cast<std::size_t>(i);
}

Matrix ccnot_matrix() {
  Matrix m = Matrix::Identity(8, 8);
  m(6, 6) = 0.0;
  m(7, 7) = 0.0;
  m(6, 7) = 1.0;
  m(7, 6) = 1.0;
  return m;
}

struct Frame {
  const CompiledKernel* kernel = nullptr;
  std::map<std::string, Value> env;
  /// Null while executing live.
  std::vector<Node>* sink = nullptr;
  /// Variables held in classical slots while tracing measurement-dependent branches.
  std::map<std::string, int> dyn_slots;
  int dyn_depth = 0;
};

class Exec {
 public:
  Exec(const KernelRegistry& registry, LiveState* live, std::vector<std::string>* log)
      : registry_(registry), live_(live), log_(log) {}

  void run_kernel(const CompiledKernel& k, const std::vector<Value>& args,
                  std::vector<Node>* sink) {
    if (++depth_ > 256) {
      throw Error(ErrorCode::CyclicDependency, "kernel call depth exceeded at '" + k.name + "'");
    }
    if (args.size() != k.params.size()) {
      throw Error(ErrorCode::ArityError, "kernel '" + k.name + "' takes " +
                                             std::to_string(k.params.size()) + " arguments, got " +
                                             std::to_string(args.size()));
    }
    Frame f;
    f.kernel = &k;
    f.sink = sink;
    for (std::size_t i = 0; i < args.size(); ++i) f.env[k.params[i].name] = args[i];
    exec_ops(f, k.program.body);
    --depth_;
  }

 private:
  // -------------------------------------------------------------------------
  // Statements

  void exec_ops(Frame& f, const OpList& ops) {
    for (const Op& op : ops) {
      try {
        std::visit([&](const auto& n) { exec(f, n); }, op.node);
      } catch (const Error& e) {
        if (annotated_) throw;
        annotated_ = true;
        std::string msg = e.what();
        auto colon = msg.find(": ");
        if (colon != std::string::npos) msg = msg.substr(colon + 2);
        throw Error(e.code(), msg + " (kernel '" + f.kernel->name + "', line " +
                                  std::to_string(op.line) + ")");
      }
    }
  }

  void exec(Frame& f, const GateOp& op) {
    const GateInfo* info = find_gate(op.name);
    std::vector<Value> args;
    for (const auto& a : op.args) args.push_back(eval(f, a));
    std::vector<int> controls;
    if (op.modifier == CallModifier::Ctrl) {
      controls = qubits_of(eval(f, op.ctrl_args.at(0)), op.name + ".ctrl control");
    }
    const std::size_t nt = static_cast<std::size_t>(info->num_targets);
    std::vector<double> params;
    for (std::size_t i = nt; i < args.size(); ++i) {
      params.push_back(to_double(args[i], op.name + " angle"));
    }
    auto finish = [&](std::vector<int> targets) {
      Instruction instr = make_gate(op.name, std::move(targets), params);
      if (op.modifier == CallModifier::Adjoint) instr = adjoint_instruction(instr);
      if (op.modifier == CallModifier::Ctrl) {
        instr.controls = controls;
        instr = canonicalize_controls(instr);
      }
      emit(f, std::move(instr));
    };
    if (nt == 1 && args.at(0).as<QRegView>()) {
      for (int q : args[0].as<QRegView>()->qubits) finish({q});
      return;
    }
    std::vector<int> targets;
    for (std::size_t i = 0; i < nt; ++i) {
      const Value& a = args.at(i);
      if (auto q = a.as<QubitRef>()) {
        targets.push_back(q->index);
      } else if (auto r = a.as<QRegView>(); r && r->qubits.size() == 1) {
        targets.push_back(r->qubits[0]);
      } else {
        type_error(op.name + " target " + std::to_string(i + 1) + " must be a qubit, got " +
                   value_type_name(a));
      }
    }
    finish(std::move(targets));
  }

  void exec(Frame& f, const CallOp& op) {
    std::shared_ptr<const CompiledKernel> k;
    if (op.via_param) {
      Value h = lookup(f, op.kernel);
      auto kh = h.as<KernelHandle>();
      if (!kh) type_error("'" + op.kernel + "' is not a kernel");
      k = registry_.find(kh->name);
      if (!k) {
        throw Error(ErrorCode::UnboundKernelReference,
                    "'" + op.kernel + "' refers to unregistered kernel '" + kh->name + "'");
      }
    } else {
      k = registry_.get(op.kernel);
    }
    if (op.args.size() != k->params.size()) {
      throw Error(ErrorCode::ArityError, "kernel '" + k->name + "' takes " +
                                             std::to_string(k->params.size()) +
                                             " arguments, got " + std::to_string(op.args.size()));
    }
    std::vector<Value> args;
    for (std::size_t i = 0; i < op.args.size(); ++i) {
      Value v;
      const Expr& e = op.args[i];
      auto name = e.as<NameRef>();
      auto it = name ? f.env.find(name->name) : f.env.end();
      if (it != f.env.end() && it->second.as<RefCell>() && k->params[i].type.is_ref()) {
        v = it->second;
      } else {
        v = eval(f, e);
      }
      args.push_back(coerce_to(v, k->params[i].type, registry_,
                               "argument '" + k->params[i].name + "' of '" + k->name + "'"));
    }
    if (op.modifier == CallModifier::None) {
      if (f.sink) {
        Composite c{k->name, {}, Region::None};
        run_kernel(*k, args, &c.children);
        f.sink->emplace_back(std::move(c));
      } else {
        run_kernel(*k, args, nullptr);
      }
      return;
    }
    Composite c{k->name, {}, Region::None};
    run_kernel(*k, args, &c.children);
    if (op.modifier == CallModifier::Adjoint) {
      emit_composite(f, adjoint(c));
    } else {
      auto controls = qubits_of(eval(f, op.ctrl_args.at(0)), k->name + ".ctrl control");
      emit_composite(f, controlled(c, controls));
    }
  }

  void exec(Frame& f, const BuiltinOp& op) {
    // exp_i_theta(q, theta, op); the only statement builtin.
    Value q = eval(f, op.args.at(0));
    double theta = to_double(eval(f, op.args.at(1)), "exp_i_theta angle");
    Value p = eval(f, op.args.at(2));
    if (auto s = p.as<std::string>()) p = parse_pauli(*s);
    auto pauli = p.as<PauliOperator>();
    if (!pauli) type_error("exp_i_theta expects a PauliOperator, got " + value_type_name(p));
    emit_composite(f, exp_i_theta(qubits_of(q, "exp_i_theta register"), theta, *pauli));
  }

  void exec(Frame& f, const AssignOp& op) {
    Value v = eval(f, op.value);
    if (!op.indices.empty()) {
      auto it = f.env.find(op.target);
      if (it == f.env.end()) {
        throw Error(ErrorCode::UndefinedName, "name '" + op.target + "' is not defined");
      }
      if (auto m = std::get_if<Matrix>(&it->second.v)) {
        if (op.indices.size() != 2) type_error("matrix element assignment needs two indices");
        auto i = normalize_index(to_int(eval(f, op.indices[0]), "row"), m->rows(), "row");
        auto j = normalize_index(to_int(eval(f, op.indices[1]), "column"), m->cols(), "column");
        (*m)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            to_complex(v, "matrix entry");
      } else if (auto l = std::get_if<std::shared_ptr<ValueList>>(&it->second.v)) {
        if (op.indices.size() != 1) type_error("list assignment needs one index");
        auto i = normalize_index(to_int(eval(f, op.indices[0]), "list index"), (*l)->size(), "list");
        (**l)[i] = v;
      } else {
        type_error("'" + op.target + "' does not support item assignment");
      }
      return;
    }
    assign(f, op.target, std::move(v));
  }

  void assign(Frame& f, const std::string& name, Value v) {
    if (auto s = f.dyn_slots.find(name); s != f.dyn_slots.end()) {
      if (f.dyn_depth > 0) {
        auto c = to_classical(v);
        if (!c) dynamic_error("assignment of a " + value_type_name(v) + " to '" + name + "'");
        f.sink->emplace_back(ClassicalNode(CAssign{s->second, name, *c}));
        return;
      }
      f.dyn_slots.erase(s);
    }
    auto it = f.env.find(name);
    if (it != f.env.end()) {
      if (auto r = it->second.as<RefCell>()) {
        Value& cell = *r->cell;
        if (cell.as<double>() && (v.as<std::int64_t>() || v.as<bool>())) {
          cell = to_double(v, name);
        } else if (cell.as<std::int64_t>() && v.as<bool>()) {
          cell = std::int64_t{*v.as<bool>()};
        } else if (v.v.index() == cell.v.index()) {
          cell = std::move(v);
        } else if (v.as<DynamicValue>()) {
          dynamic_error("by-reference parameter '" + name + "'");
        } else {
          type_error("cannot store " + value_type_name(v) + " in reference '" + name + "' of type " +
                     value_type_name(cell));
        }
        return;
      }
    }
    f.env[name] = std::move(v);
  }

  void exec(Frame& f, const ForOp& op) {
    Value it = eval(f, op.iterable);
    std::vector<Value> items;
    if (auto l = it.as<std::shared_ptr<ValueList>>()) {
      items = **l;
    } else if (auto r = it.as<QRegView>()) {
      for (int q : r->qubits) items.emplace_back(QubitRef{q});
    } else if (it.as<DynamicValue>()) {
      dynamic_error("loop range");
    } else {
      type_error("cannot iterate over " + value_type_name(it));
    }
    for (Value& v : items) {
      assign(f, op.var, std::move(v));
      exec_ops(f, op.body);
    }
  }

  static bool truthy(const Value& v) {
    if (auto b = v.as<bool>()) return *b;
    if (auto i = v.as<std::int64_t>()) return *i != 0;
    if (auto d = v.as<double>()) return *d != 0.0;
    if (auto c = v.as<Complex>()) return *c != Complex(0.0);
    if (auto l = v.as<std::shared_ptr<ValueList>>()) return !(*l)->empty();
    if (auto s = v.as<std::string>()) return !s->empty();
    if (auto p = v.as<PauliOperator>()) return !p->empty();
    type_error("a " + value_type_name(v) + " has no truth value");
  }

  static void assigned_names(const OpList& ops, std::set<std::string>& out) {
    for (const Op& op : ops) {
      if (auto a = op.as<AssignOp>(); a && a->indices.empty()) out.insert(a->target);
      if (auto l = op.as<ForOp>()) {
        out.insert(l->var);
        assigned_names(l->body, out);
      }
      if (auto i = op.as<IfOp>()) {
        for (const auto& b : i->branches) assigned_names(b.second, out);
        assigned_names(i->else_body, out);
      }
    }
  }

  void exec(Frame& f, const IfOp& op) { exec_if(f, op, 0); }

  void exec_if(Frame& f, const IfOp& op, std::size_t from) {
    for (std::size_t i = from; i < op.branches.size(); ++i) {
      Value c = eval(f, op.branches[i].first);
      if (auto d = c.as<DynamicValue>()) {
        dynamic_if(f, op, i, d->expr);
        return;
      }
      if (truthy(c)) {
        exec_ops(f, op.branches[i].second);
        return;
      }
    }
    exec_ops(f, op.else_body);
  }

  /// Records branches guarded by a measurement result as a CIf node.
  void dynamic_if(Frame& f, const IfOp& op, std::size_t branch, const ClassicalExpr& cond) {
    if (!f.sink) dynamic_error("condition");
    std::set<std::string> names;
    for (std::size_t i = branch; i < op.branches.size(); ++i) {
      assigned_names(op.branches[i].second, names);
    }
    assigned_names(op.else_body, names);
    for (const auto& name : names) {
      if (f.dyn_slots.count(name)) continue;
      int slot = next_slot_++;
      auto it = f.env.find(name);
      if (it != f.env.end()) {
        if (it->second.as<RefCell>()) dynamic_error("by-reference parameter '" + name + "'");
        auto c = to_classical(it->second);
        if (!c) dynamic_error("'" + name + "'");
        f.sink->emplace_back(ClassicalNode(CAssign{slot, name, *c}));
      }
      f.dyn_slots[name] = slot;
      f.env[name] = DynamicValue{ClassicalExpr::slot_ref(slot)};
    }

    CIf node{cond, {}, {}};
    std::vector<Node>* saved = f.sink;
    ++f.dyn_depth;
    f.sink = &node.then_children;
    exec_ops(f, op.branches[branch].second);
    f.sink = &node.else_children;
    exec_if(f, op, branch + 1);
    f.sink = saved;
    --f.dyn_depth;
    f.sink->emplace_back(ClassicalNode(std::move(node)));
  }

  void exec(Frame& f, const ComputeActionOp& op) {
    Composite u{"compute", {}, Region::Compute};
    Composite v{"action", {}, Region::Action};
    std::vector<Node>* saved = f.sink;
    f.sink = &u.children;
    exec_ops(f, op.compute);
    f.sink = &v.children;
    exec_ops(f, op.action);
    f.sink = saved;
    emit_composite(f, expand_compute_action(u, v));
  }

  void exec(Frame& f, const SynthesisOp& op) {
    exec_ops(f, op.provider);
    Value mv = lookup(f, op.matrix_var);
    Matrix m;
    if (auto x = mv.as<Matrix>()) {
      m = *x;
    } else if (auto l = mv.as<std::shared_ptr<ValueList>>()) {
      m = list_to_matrix(**l);
    } else {
      type_error("decompose block must leave a matrix in '" + op.matrix_var + "', got " +
                 value_type_name(mv));
    }
    auto targets = qubits_of(eval(f, op.qreg), "decompose register");
    if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << targets.size())) {
      throw Error(ErrorCode::DimensionMismatch,
                  "a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      " matrix does not act on " + std::to_string(targets.size()) + " qubit(s)");
    }
    emit_composite(f, synthesize(m, targets, op.method));
  }

  void exec(Frame& f, const PrintOp& op) {
    std::vector<Value> args;
    bool dynamic = f.dyn_depth > 0;
    for (const auto& a : op.args) {
      args.push_back(eval(f, a));
      if (args.back().as<DynamicValue>()) dynamic = true;
    }
    CPrint node;
    std::string line;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) line += ' ';
      line += format_value(args[i]);
      if (auto d = args[i].as<DynamicValue>()) {
        node.args.emplace_back(d->expr);
      } else {
        node.args.emplace_back(format_value(args[i]));
      }
    }
    if (!dynamic && log_) log_->push_back(line);
    if (f.sink) f.sink->emplace_back(ClassicalNode(std::move(node)));
  }

  // -------------------------------------------------------------------------
  // Gate emission

  void emit(Frame& f, Instruction instr) {
    validate_instruction(instr);
    if (instr.name == "Measure" && f.sink) instr.classical_target = next_slot_++;
    if (f.sink) {
      f.sink->emplace_back(std::move(instr));
    } else {
      apply_live(instr);
    }
  }

  void emit_composite(Frame& f, Composite c) {
    if (f.sink) {
      f.sink->emplace_back(std::move(c));
      return;
    }
    for (const Instruction& i : flatten(c)) apply_live(i);
  }

  bool apply_live(const Instruction& i) {
    if (i.name == "Measure") {
      bool bit = live_->state->measure(i.targets[0], *live_->rng);
      live_->last_measurement.at(static_cast<std::size_t>(i.targets[0])) = bit;
      return bit;
    }
    if (i.name == "Reset") {
      live_->state->reset(i.targets[0], *live_->rng);
      return false;
    }
    live_->state->apply(i);
    return false;
  }

  Value measure_value(Frame& f, const Value& arg) {
    auto qs = qubits_of(arg, "Measure target");
    if (qs.size() != 1) type_error("Measure used as a value needs a single qubit");
    Instruction instr = make_gate("Measure", {qs[0]});
    validate_instruction(instr);
    if (f.sink) {
      int slot = next_slot_++;
      instr.classical_target = slot;
      f.sink->emplace_back(std::move(instr));
      return DynamicValue{ClassicalExpr::slot_ref(slot)};
    }
    return apply_live(instr);
  }

  // -------------------------------------------------------------------------
  // Expressions

  Value lookup(Frame& f, const std::string& name) {
    if (auto it = f.env.find(name); it != f.env.end()) {
      if (auto r = it->second.as<RefCell>()) return *r->cell;
      return it->second;
    }
    if (registry_.contains(name)) return KernelHandle{name};
    if (name == "pi") return std::numbers::pi;
    throw Error(ErrorCode::UndefinedName, "name '" + name + "' is not defined");
  }

  static bool is_module(const Frame& f, const Expr& e) {
    auto n = e.as<NameRef>();
    return n && !f.env.count(n->name) &&
           (n->name == "np" || n->name == "numpy" || n->name == "math");
  }

  Value eval(Frame& f, const Expr& e) {
    return std::visit([&](const auto& n) -> Value { return eval_node(f, n); }, e.node);
  }

  Value eval_node(Frame&, const IntLit& n) { return n.value; }
  Value eval_node(Frame&, const FloatLit& n) { return n.value; }
  Value eval_node(Frame&, const ImagLit& n) { return Complex(0.0, n.value); }
  Value eval_node(Frame&, const StringLit& n) { return n.value; }
  Value eval_node(Frame&, const BoolLit& n) { return n.value; }
  Value eval_node(Frame& f, const NameRef& n) { return lookup(f, n.name); }
  Value eval_node(Frame&, const Slice&) { type_error("slice outside of a subscript"); }

  Value eval_node(Frame& f, const Attribute& n) {
    if (is_module(f, *n.base)) {
      if (n.name == "pi") return std::numbers::pi;
      if (n.name == "e") return std::numbers::e;
      throw Error(ErrorCode::UndefinedName, "unknown constant '" + n.name + "'");
    }
    Value base = eval(f, *n.base);
    if (auto m = base.as<Matrix>()) {
      if (n.name == "T") return Matrix(m->transpose());
      if (n.name == "real") return Matrix(m->real().cast<Complex>());
    }
    type_error(value_type_name(base) + " has no attribute '" + n.name + "'");
  }

  Value eval_node(Frame& f, const ListLit& n) {
    ValueList items;
    for (const auto& e : n.items) items.push_back(eval(f, e));
    return make_list(std::move(items));
  }

  Value eval_node(Frame& f, const Unary& n) {
    Value v = eval(f, *n.operand);
    if (auto d = v.as<DynamicValue>()) return DynamicValue{ClassicalExpr::unary(n.op, d->expr)};
    switch (n.op) {
      case UnaryOp::Not: return !truthy(v);
      case UnaryOp::Plus:
        if (!is_number(v)) type_error("bad operand for unary +: " + value_type_name(v));
        return v;
      case UnaryOp::Neg:
        if (auto b = v.as<bool>()) return std::int64_t{-static_cast<std::int64_t>(*b)};
        if (auto i = v.as<std::int64_t>()) return -*i;
        if (auto d = v.as<double>()) return -*d;
        if (auto c = v.as<Complex>()) return -*c;
        if (auto p = v.as<PauliOperator>()) return -*p;
        if (auto m = v.as<Matrix>()) return Matrix(-*m);
        type_error("bad operand for unary -: " + value_type_name(v));
    }
    return v;
  }

  Value eval_node(Frame& f, const Binary& n) {
    if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
      Value a = eval(f, *n.lhs);
      if (!a.as<DynamicValue>()) {
        bool t = truthy(a);
        if (n.op == BinaryOp::And && !t) return false;
        if (n.op == BinaryOp::Or && t) return true;
        Value b = eval(f, *n.rhs);
        if (b.as<DynamicValue>()) return b;
        return truthy(b);
      }
      Value b = eval(f, *n.rhs);
      auto cb = to_classical(b);
      if (!cb) type_error("bad operand for " + std::string(binary_op_text(n.op)));
      return DynamicValue{ClassicalExpr::binary(n.op, a.as<DynamicValue>()->expr, *cb)};
    }
    Value a = eval(f, *n.lhs);
    Value b = eval(f, *n.rhs);
    return arithmetic(n.op, a, b);
  }

  Value eval_node(Frame& f, const Subscript& n) {
    Value base = eval(f, *n.base);
    if (n.indices.size() == 2) {
      auto m = base.as<Matrix>();
      if (!m) type_error(value_type_name(base) + " does not take two indices");
      auto i = normalize_index(to_int(eval(f, n.indices[0]), "row"), m->rows(), "row");
      auto j = normalize_index(to_int(eval(f, n.indices[1]), "column"), m->cols(), "column");
      return (*m)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    if (n.indices.size() != 1) type_error("unsupported subscript");
    const Expr& idx = n.indices[0];

    std::size_t size = 0;
    if (auto r = base.as<QRegView>()) {
      size = r->qubits.size();
    } else if (auto l = base.as<std::shared_ptr<ValueList>>()) {
      size = (*l)->size();
    } else if (auto m = base.as<Matrix>()) {
      size = static_cast<std::size_t>(m->rows());
    } else {
      type_error(value_type_name(base) + " is not subscriptable");
    }

    if (auto s = idx.as<Slice>()) {
      const auto sz = static_cast<std::int64_t>(size);
      auto bound = [&](const std::optional<Box<Expr>>& b, std::int64_t dflt) {
        if (!b) return dflt;
        std::int64_t v = to_int(eval(f, **b), "slice bound");
        if (v < 0) v += sz;
        return std::clamp<std::int64_t>(v, 0, sz);
      };
      std::int64_t lo = bound(s->lower, 0), hi = bound(s->upper, sz);
      if (hi < lo) hi = lo;
      if (auto r = base.as<QRegView>()) {
        return QRegView{std::vector<int>(r->qubits.begin() + lo, r->qubits.begin() + hi)};
      }
      if (auto l = base.as<std::shared_ptr<ValueList>>()) {
        return make_list(ValueList((*l)->begin() + lo, (*l)->begin() + hi));
      }
      type_error("matrix slicing is not supported");
    }

    std::size_t i = normalize_index(to_int(eval(f, idx), "index"), size,
                                    base.as<QRegView>() ? "register" : "list");
    if (auto r = base.as<QRegView>()) return QubitRef{r->qubits[i]};
    if (auto l = base.as<std::shared_ptr<ValueList>>()) return (**l)[i];
    type_error("matrix rows are not values; index with [i, j]");
  }

  Value eval_node(Frame& f, const Call& n) {
    std::vector<Value> args;
    auto eval_args = [&] {
      for (const auto& a : n.args) args.push_back(eval(f, a));
    };

    if (auto attr = n.callee->as<Attribute>()) {
      if (is_module(f, *attr->base)) {
        eval_args();
        return call_function(attr->name, args);
      }
      Value base = eval(f, *attr->base);
      eval_args();
      if (attr->name == "size" && args.empty()) {
        if (auto r = base.as<QRegView>()) return static_cast<std::int64_t>(r->qubits.size());
      }
      if (auto m = base.as<Matrix>()) {
        if (attr->name == "conj" && args.empty()) return Matrix(m->conjugate());
        if (attr->name == "transpose" && args.empty()) return Matrix(m->transpose());
      }
      type_error(value_type_name(base) + " has no method '" + attr->name + "'");
    }

    auto name_ref = n.callee->as<NameRef>();
    if (!name_ref) type_error("expression is not callable");
    const std::string& name = name_ref->name;
    if (f.env.count(name)) type_error("'" + name + "' is not callable");
    if (name == "Measure" || name == "Mz") {
      if (n.args.size() != 1) throw Error(ErrorCode::ArityError, "Measure takes one qubit");
      return measure_value(f, eval(f, n.args[0]));
    }
    if (find_gate(name)) type_error("gate '" + name + "' does not produce a value");
    if (registry_.contains(name)) type_error("kernel '" + name + "' does not produce a value");
    eval_args();
    return call_function(name, args);
  }

  Value call_function(const std::string& name, const std::vector<Value>& args) {
    auto want = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) {
        throw Error(ErrorCode::ArityError, name + "() got " + std::to_string(args.size()) +
                                               " arguments");
      }
    };
    auto real_or_complex = [&](double (*fr)(double), Complex (*fc)(const Complex&)) -> Value {
      want(1, 1);
      if (args[0].as<Complex>()) return fc(*args[0].as<Complex>());
      return fr(to_double(args[0], name + " argument"));
    };
    if (name == "range") {
      want(1, 3);
      std::int64_t lo = 0, hi = 0, step = 1;
      if (args.size() == 1) {
        hi = to_int(args[0], "range bound");
      } else {
        lo = to_int(args[0], "range bound");
        hi = to_int(args[1], "range bound");
        if (args.size() == 3) step = to_int(args[2], "range step");
      }
      if (step == 0) throw Error(ErrorCode::RuntimeError, "range() step must not be zero");
      ValueList items;
      for (std::int64_t i = lo; step > 0 ? i < hi : i > hi; i += step) items.emplace_back(i);
      return make_list(std::move(items));
    }
    if (name == "len") {
      want(1, 1);
      if (auto l = args[0].as<std::shared_ptr<ValueList>>()) {
        return static_cast<std::int64_t>((*l)->size());
      }
      if (auto r = args[0].as<QRegView>()) return static_cast<std::int64_t>(r->qubits.size());
      if (auto s = args[0].as<std::string>()) return static_cast<std::int64_t>(s->size());
      if (auto p = args[0].as<PauliOperator>()) return static_cast<std::int64_t>(p->size());
      type_error("object of type " + value_type_name(args[0]) + " has no len()");
    }
    if (name == "abs") {
      want(1, 1);
      if (auto i = args[0].as<std::int64_t>()) return *i < 0 ? -*i : *i;
      if (auto c = args[0].as<Complex>()) return std::abs(*c);
      return std::abs(to_double(args[0], "abs argument"));
    }
    if (name == "int") {
      want(1, 1);
      if (auto d = args[0].as<double>()) return static_cast<std::int64_t>(std::trunc(*d));
      return to_int(args[0], "int argument");
    }
    if (name == "float") {
      want(1, 1);
      return to_double(args[0], "float argument");
    }
    if (name == "bool") {
      want(1, 1);
      return truthy(args[0]);
    }
    if (name == "complex") {
      want(1, 2);
      double im = args.size() == 2 ? to_double(args[1], "imaginary part") : 0.0;
      return Complex(to_double(args[0], "real part"), im);
    }
    if (name == "round") {
      want(1, 1);
      return static_cast<std::int64_t>(std::nearbyint(to_double(args[0], "round argument")));
    }
    if (name == "min" || name == "max") {
      std::vector<Value> items = args;
      if (args.size() == 1) {
        if (auto l = args[0].as<std::shared_ptr<ValueList>>()) items = **l;
      }
      if (items.empty()) throw Error(ErrorCode::RuntimeError, name + "() of an empty sequence");
      Value best = items[0];
      for (const Value& v : items) {
        bool lt = std::get<bool>(arithmetic(BinaryOp::Lt, v, best).v);
        if (name == "min" ? lt : std::get<bool>(arithmetic(BinaryOp::Gt, v, best).v)) best = v;
      }
      return best;
    }
    if (name == "sqrt") {
      want(1, 1);
      if (auto c = args[0].as<Complex>()) return std::sqrt(*c);
      double x = to_double(args[0], "sqrt argument");
      if (x < 0) return std::sqrt(Complex(x));
      return std::sqrt(x);
    }
    if (name == "sin") return real_or_complex(std::sin, std::sin);
    if (name == "cos") return real_or_complex(std::cos, std::cos);
    if (name == "tan") return real_or_complex(std::tan, std::tan);
    if (name == "exp") return real_or_complex(std::exp, std::exp);
    if (name == "eye" || name == "identity") {
      want(1, 1);
      auto n = to_int(args[0], name + " size");
      if (n < 0) throw Error(ErrorCode::DimensionMismatch, "negative matrix size");
      return Matrix(Matrix::Identity(n, n));
    }
    if (name == "zeros") {
      want(1, 1);
      auto n = to_int(args[0], "zeros size");
      if (n < 0) throw Error(ErrorCode::DimensionMismatch, "negative matrix size");
      return Matrix(Matrix::Zero(n, n));
    }
    if (name == "array") {
      want(1, 1);
      if (auto l = args[0].as<std::shared_ptr<ValueList>>()) return list_to_matrix(**l);
      type_error("array() expects a nested list");
    }
    if (name == "kron") {
      want(2, 2);
      auto a = args[0].as<Matrix>();
      auto b = args[1].as<Matrix>();
      if (!a || !b) type_error("kron() expects matrices");
      return kron(*a, *b);
    }
    if (name == "ccnot_matrix") {
      want(0, 0);
      return ccnot_matrix();
    }
    throw Error(ErrorCode::UndefinedName, "unknown function '" + name + "'");
  }

  const KernelRegistry& registry_;
  LiveState* live_;
  std::vector<std::string>* log_;
  int next_slot_ = 0;
  int depth_ = 0;
  bool annotated_ = false;
};

}  // namespace

Composite Interpreter::trace(const CompiledKernel& k, const std::vector<Value>& args,
                             std::vector<std::string>* log) const {
  Exec exec(registry_, nullptr, log);
  Composite root{k.name, {}, Region::None};
  exec.run_kernel(k, args, &root.children);
  return root;
}

void Interpreter::run_live(const CompiledKernel& k, const std::vector<Value>& args,
                           LiveState& live, std::vector<std::string>* log) const {
  if (!live.state || !live.rng) throw Error(ErrorCode::RuntimeError, "live execution needs a state");
  live.last_measurement.resize(static_cast<std::size_t>(live.state->num_qubits()), -1);
  Exec exec(registry_, &live, log);
  exec.run_kernel(k, args, nullptr);
}

}  // namespace qk
