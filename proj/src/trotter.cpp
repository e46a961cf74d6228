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

#include "qk/trotter.hpp"

#include <numbers>
#include <string>

#include "qk/error.hpp"

namespace qk {

Composite exp_i_theta(const std::vector<int>& reg, double theta, const PauliOperator& op) {
  if (!op.is_hermitian(1e-10)) {
    throw Error(ErrorCode::NonHermitianGenerator, "exp_i_theta needs real coefficients: " +
                                                      op.to_string());
  }
  const double half_pi = std::numbers::pi / 2;
  Composite out{"exp_i_theta", {}, Region::None};
  auto emit = [&](Instruction i) { out.children.emplace_back(std::move(i)); };
  for (const auto& [word, coeff] : op.terms()) {
    if (word.empty()) continue;
    std::vector<int> qs;
    for (const auto& [k, p] : word) {
      if (k < 0 || k >= static_cast<int>(reg.size())) {
        throw Error(ErrorCode::IndexOutOfRange, "operator qubit " + std::to_string(k) +
                                                    " outside register of size " +
                                                    std::to_string(reg.size()));
      }
      qs.push_back(reg[k]);
    }
    auto basis = [&](bool undo) {
      int i = 0;
      for (const auto& [k, p] : word) {
        if (p == 'X') emit(make_gate("H", {qs[i]}));
        if (p == 'Y') emit(make_gate("Rx", {qs[i]}, {undo ? -half_pi : half_pi}));
        ++i;
      }
    };
    basis(false);
    for (std::size_t i = 0; i + 1 < qs.size(); ++i) emit(make_gate("CX", {qs[i], qs[i + 1]}));
    emit(make_gate("Rz", {qs.back()}, {-2.0 * theta * coeff.real()}));
    for (std::size_t i = qs.size() - 1; i > 0; --i) emit(make_gate("CX", {qs[i - 1], qs[i]}));
    basis(true);
  }
  return out;
}

}  // namespace qk
