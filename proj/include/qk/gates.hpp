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

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace qk {

enum class AdjointRule { SelfInverse, NegateParams, SwapTo };

struct GateInfo {
  std::string_view name;
  int num_targets;
  int num_params;
  bool unitary;
  AdjointRule adjoint_rule;
  std::string_view adjoint_name;  // for SwapTo
  std::string_view qasm_name;     // empty when not directly exportable
};

/// Looks up a gate by canonical name or alias (CNOT -> CX, Mz -> Measure).
/// Matching is case-sensitive.
const GateInfo* find_gate(std::string_view name) noexcept;

/// Canonical spelling for a gate name or alias; nullopt when unknown.
std::optional<std::string> canonical_gate_name(std::string_view name);

/// Every accepted intrinsic name, aliases included.
const std::set<std::string>& intrinsic_names();

}  // namespace qk
