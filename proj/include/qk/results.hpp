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
#include <string>
#include <string_view>

#include "qk/ir.hpp"

namespace qk {

inline constexpr std::string_view kResultsSchema = "qk.results/1";

struct Timing {
  std::int64_t parse_ns = 0;
  std::int64_t lower_ns = 0;
  std::int64_t execute_ns = 0;
};

struct ResultsDocument {
  std::string kernel;
  std::string backend;
  std::string mode;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  QReg::Results results;
  Timing timing;
};

/// JSON text with keys in a fixed order. Amplitudes are `[re, im]` pairs and
/// appear only when non-empty.
std::string results_to_json(const ResultsDocument& doc, bool include_timing = true);

/// Inverse of results_to_json. Throws TypeMismatch on a wrong schema or shape.
ResultsDocument results_from_json(std::string_view text);

}  // namespace qk
