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

#include <vector>

#include "qk/ir.hpp"

namespace qk {

/// Dagger of one gate via the adjoint table. Throws NonUnitarySubcircuit for
/// Measure and Reset.
Instruction adjoint_instruction(const Instruction& instr);

/// Children reversed, each daggered. Compute and uncompute regions trade tags.
Composite adjoint(const Composite& c);

/// Adds `controls` to every gate, except that compute/uncompute regions are
/// left untouched and only action regions are controlled.
Composite controlled(const Composite& c, const std::vector<int>& controls);

/// Gate-by-gate control of every instruction, ignoring region tags.
Composite controlled_naive(const Composite& c, const std::vector<int>& controls);

/// [compute][action][adjoint(compute)] with region tags.
/// Throws MeasureInComputeBlock if the compute part measures or resets.
Composite expand_compute_action(const Composite& compute, const Composite& action);

/// Cancels adjacent inverse pairs and merges adjacent same-axis rotations,
/// repeated to a fixed point. Output is a flat composite with the input's name.
Composite peephole_optimize(const Composite& c);

std::vector<Instruction> peephole_optimize(const std::vector<Instruction>& instrs);

}  // namespace qk
