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

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qk/ast.hpp"
#include "qk/gates.hpp"
#include "qk/lexer.hpp"

namespace qk {

enum class CallKind { Intrinsic, Kernel, KernelModifier, Classical };

struct CallClass {
  CallKind kind = CallKind::Classical;
  CallModifier modifier = CallModifier::None;
  /// Callee without the `.ctrl` / `.adjoint` suffix, canonicalized for gates.
  std::string base;
  friend bool operator==(const CallClass&, const CallClass&) = default;
};

/// Classifies a call name such as `CX`, `c.adjoint` or `print`. Names that
/// are neither intrinsics nor known kernels fall through to Classical.
CallClass classify_call(std::string_view name, const std::set<std::string>& kernels,
                        const std::set<std::string>& gates = intrinsic_names());

/// Names the parser treats as callable kernels while parsing a body.
struct ParseContext {
  std::set<std::string> kernels;
};

/// Parses exactly one `def` (decorator lines allowed) from a token stream.
KernelAST parse_kernel(const std::vector<Token>& tokens, const ParseContext& ctx = {});

/// One kernel of a multi-kernel file along with its verbatim source slice.
struct ParsedKernel {
  KernelAST ast;
  std::string source;
};

/// Parses every `def` in a `.qk` file. Top-level `import` / `from` lines and
/// decorators are ignored; every kernel name in the file is visible to every
/// other kernel during classification.
std::vector<ParsedKernel> parse_file(std::string_view source, const ParseContext& ctx = {});

/// One top-level `def` cut out of a file without parsing it.
struct KernelSlice {
  std::string name;
  int line = 0;
  std::string source;
  /// Every identifier token in the slice.
  std::set<std::string> identifiers;
};

/// Splits a `.qk` file into per-kernel source slices by token position.
std::vector<KernelSlice> split_kernels(std::string_view source);

/// Convenience: tokenize + parse_kernel.
KernelAST parse_kernel_source(std::string_view source, const ParseContext& ctx = {});

}  // namespace qk
