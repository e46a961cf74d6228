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
#include "qk/pauli.hpp"

namespace qk {

/// Circuit for exp(+i theta op) as a first-order product over the terms of
/// `op`, in term order. Operator qubit k acts on register[k]. Per term:
/// basis change (H for X, Rx(pi/2) for Y), ascending CX ladder, Rz(-2 theta c)
/// on the highest qubit, then the mirror image. Identity terms only add a
/// global phase and emit nothing. Throws NonHermitianGenerator when some
/// coefficient has |Im c| >= 1e-10, and IndexOutOfRange when the operator
/// reaches past the register.
Composite exp_i_theta(const std::vector<int>& reg, double theta, const PauliOperator& op);

}  // namespace qk
