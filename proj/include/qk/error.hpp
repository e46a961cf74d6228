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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qk {

enum class ErrorCode {
  // lexing / parsing
  IndentationError,
  TabSpaceMix,
  UnterminatedString,
  SyntaxError,
  MissingAnnotation,
  FirstArgNotQreg,
  // lowering
  UnknownKernel,
  UnknownGate,
  UndefinedName,
  TypeMismatch,
  ArityError,
  CyclicDependency,
  ComputeWithoutAction,
  MeasureInComputeBlock,
  ShadowedKernelName,
  UnknownSynthesisMethod,
  UnboundKernelReference,
  // IR / transforms / synthesis
  NonUnitaryGate,
  NonUnitarySubcircuit,
  DynamicControlFlowInCircuitMode,
  NonUnitaryInput,
  DimensionMismatch,
  IndexOutOfRange,
  UnsupportedGateForExport,
  // operators
  MalformedOperator,
  NonHermitianGenerator,
  NonHermitianObservable,
  // runtime / backends
  RuntimeError,
  BackendNotFound,
  BackendCapabilityError,
  // cache
  CacheCorruption,
  IoError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Broad failure class, used for CLI exit codes.
enum class ErrorCategory { Compile, Runtime, Backend };

ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse errors carry a 1-based source position.
class SourceError : public Error {
 public:
  SourceError(ErrorCode code, const std::string& message, int line, int column)
      : Error(code, message + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace qk
