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
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qk/compiler.hpp"
#include "qk/ir.hpp"
#include "qk/pauli.hpp"
#include "qk/statevector.hpp"

namespace qk {

struct Value;
using ValueList = std::vector<Value>;

struct QubitRef {
  int index = 0;  // absolute, in the root register
  friend bool operator==(const QubitRef&, const QubitRef&) = default;
};
struct QRegView {
  std::vector<int> qubits;
  friend bool operator==(const QRegView&, const QRegView&) = default;
};
struct KernelHandle {
  std::string name;
  friend bool operator==(const KernelHandle&, const KernelHandle&) = default;
};
/// Value known only after a measurement: an expression over classical slots.
struct DynamicValue {
  ClassicalExpr expr;
};
/// Shared mutable cell backing IntRef / FloatRef / BoolRef parameters.
struct RefCell {
  std::shared_ptr<Value> cell;
};

struct Value {
  std::variant<std::monostate, bool, std::int64_t, double, Complex, std::string, QubitRef, QRegView,
               std::shared_ptr<ValueList>, PauliOperator, KernelHandle, Matrix, DynamicValue, RefCell>
      v;

  Value() = default;
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Value>)
  Value(T x) : v(std::move(x)) {}
  Value(int x) : v(std::int64_t{x}) {}

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
};

Value make_list(ValueList items);
/// Python-like text used by print().
std::string format_value(const Value& v);
std::string value_type_name(const Value& v);

/// Converts `v` to the parameter type, or throws TypeMismatch /
/// UnboundKernelReference. Kernel handles are checked against `registry`.
Value coerce_to(const Value& v, const TypeAnnotation& type, const KernelRegistry& registry,
                const std::string& what);

/// Live (eager) execution state for the FTQC path.
struct LiveState {
  StateVector* state = nullptr;
  Rng* rng = nullptr;
  /// Last outcome per qubit; -1 when never measured.
  std::vector<int> last_measurement;
};

/// Runs a kernel with bound arguments (one Value per parameter, the first a
/// QRegView of the root register). In trace mode gates are recorded into the
/// returned composite and Measure results become classical slots; with a
/// LiveState gates act immediately and measurements return concrete bits.
class Interpreter {
 public:
  explicit Interpreter(const KernelRegistry& registry) : registry_(registry) {}

  Composite trace(const CompiledKernel& k, const std::vector<Value>& args,
                  std::vector<std::string>* log = nullptr) const;

  void run_live(const CompiledKernel& k, const std::vector<Value>& args, LiveState& live,
                std::vector<std::string>* log = nullptr) const;

 private:
  const KernelRegistry& registry_;
};

}  // namespace qk
