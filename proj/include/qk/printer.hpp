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

#include <string>

#include "qk/ast.hpp"

namespace qk {

/// Canonical source text for a kernel. Re-parsing the output yields an equal AST.
std::string print_kernel_source(const KernelAST& ast);

std::string print_expr(const Expr& expr);

/// Shortest round-trip decimal form; always contains '.' or an exponent.
std::string format_float(double value);

}  // namespace qk
