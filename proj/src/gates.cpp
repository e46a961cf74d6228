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

#include "qk/gates.hpp"

#include <array>
#include <utility>

namespace qk {

namespace {

using enum AdjointRule;

constexpr std::array<GateInfo, 20> kGates = {{
    {"H", 1, 0, true, SelfInverse, "", "h"},
    {"X", 1, 0, true, SelfInverse, "", "x"},
    {"Y", 1, 0, true, SelfInverse, "", "y"},
    {"Z", 1, 0, true, SelfInverse, "", "z"},
    {"S", 1, 0, true, SwapTo, "Sdg", "s"},
    {"Sdg", 1, 0, true, SwapTo, "S", "sdg"},
    {"T", 1, 0, true, SwapTo, "Tdg", "t"},
    {"Tdg", 1, 0, true, SwapTo, "T", "tdg"},
    {"Rx", 1, 1, true, NegateParams, "", "rx"},
    {"Ry", 1, 1, true, NegateParams, "", "ry"},
    {"Rz", 1, 1, true, NegateParams, "", "rz"},
    {"CX", 2, 0, true, SelfInverse, "", "cx"},
    {"CY", 2, 0, true, SelfInverse, "", "cy"},
    {"CZ", 2, 0, true, SelfInverse, "", "cz"},
    {"Swap", 2, 0, true, SelfInverse, "", "swap"},
    {"CRz", 2, 1, true, NegateParams, "", "crz"},
    {"CPhase", 2, 1, true, NegateParams, "", "cu1"},
    {"fSim", 2, 2, true, NegateParams, "", ""},
    {"Measure", 1, 0, false, SelfInverse, "", "measure"},
    {"Reset", 1, 0, false, SelfInverse, "", "reset"},
}};

constexpr std::array<std::pair<std::string_view, std::string_view>, 2> kAliases = {{
    {"CNOT", "CX"},
    {"Mz", "Measure"},
}};

}  // namespace

const GateInfo* find_gate(std::string_view name) noexcept {
  for (const auto& [alias, target] : kAliases) {
    if (alias == name) {
      name = target;
      break;
    }
  }
  for (const auto& g : kGates) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::optional<std::string> canonical_gate_name(std::string_view name) {
  if (const GateInfo* g = find_gate(name)) return std::string(g->name);
  return std::nullopt;
}

const std::set<std::string>& intrinsic_names() {
  static const std::set<std::string> names = [] {
    std::set<std::string> s;
    for (const auto& g : kGates) s.emplace(g.name);
    for (const auto& [alias, target] : kAliases) s.emplace(alias);
    return s;
  }();
  return names;
}

}  // namespace qk
