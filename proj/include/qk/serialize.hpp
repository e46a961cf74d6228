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
#include <string_view>

#include "qk/compiler.hpp"

namespace qk {

/// Version of the private program encoding below; bump on any layout change.
inline constexpr int kProgramFormatVersion = 1;

/// Private binary encoding of a compiled kernel (metadata plus program).
std::string serialize_kernel(const CompiledKernel& k);

/// Throws CacheCorruption on malformed or truncated input.
CompiledKernel deserialize_kernel(std::string_view bytes);

}  // namespace qk
