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

#include <functional>
#include <memory>
#include <vector>

#include "qk/args.hpp"
#include "qk/compiler.hpp"
#include "qk/pauli.hpp"
#include "qk/runtime.hpp"

namespace qk {

struct OptimizerResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
};

struct NelderMeadOptions {
  int max_evaluations = 100;
  /// Offset of the initial simplex vertices along each axis.
  double initial_step = 0.5;
  /// Stop once the spread of simplex values and the simplex diameter both fall below these.
  double ftol = 1e-10;
  double xtol = 1e-8;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Gradient-free minimization. Never calls `f` more than max_evaluations times.
OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0,
                            const NelderMeadOptions& opts = {});

/// Energy of a parameterized kernel against an observable. Parameters are
/// bound in declaration order: each float takes one entry, a list[float]
/// takes the rest. Other non-register arguments come from `fixed`.
class ObjectiveFunction {
 public:
  ObjectiveFunction(const KernelRegistry& registry, std::shared_ptr<const CompiledKernel> kernel,
                    PauliOperator observable, int qreg_size, ArgPack fixed = {},
                    ExecOptions opts = {.shots = 0});

  double operator()(const std::vector<double>& x);

  /// Number of variational entries the kernel expects, or -1 when a
  /// list[float] parameter leaves it open.
  int dimension() const { return dimension_; }
  int evaluations() const { return evaluations_; }
  ArgPack bind(const std::vector<double>& x) const;

 private:
  const KernelRegistry& registry_;
  std::shared_ptr<const CompiledKernel> kernel_;
  PauliOperator observable_;
  int qreg_size_;
  ArgPack fixed_;
  ExecOptions opts_;
  int dimension_ = 0;
  int evaluations_ = 0;
};

}  // namespace qk
