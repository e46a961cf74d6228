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

#include "qk/error.hpp"

namespace qk {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IndentationError: return "IndentationError";
    case ErrorCode::TabSpaceMix: return "TabSpaceMixError";
    case ErrorCode::UnterminatedString: return "UnterminatedString";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::MissingAnnotation: return "MissingAnnotation";
    case ErrorCode::FirstArgNotQreg: return "FirstArgNotQreg";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::UnknownGate: return "UnknownGate";
    case ErrorCode::UndefinedName: return "UndefinedName";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::CyclicDependency: return "CyclicDependency";
    case ErrorCode::ComputeWithoutAction: return "ComputeWithoutAction";
    case ErrorCode::MeasureInComputeBlock: return "MeasureInComputeBlock";
    case ErrorCode::ShadowedKernelName: return "ShadowedKernelName";
    case ErrorCode::UnknownSynthesisMethod: return "UnknownSynthesisMethod";
    case ErrorCode::UnboundKernelReference: return "UnboundKernelReference";
    case ErrorCode::NonUnitaryGate: return "NonUnitaryGate";
    case ErrorCode::NonUnitarySubcircuit: return "NonUnitarySubcircuit";
    case ErrorCode::DynamicControlFlowInCircuitMode: return "DynamicControlFlowInCircuitMode";
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedGateForExport: return "UnsupportedGateForExport";
    case ErrorCode::MalformedOperator: return "MalformedOperator";
    case ErrorCode::NonHermitianGenerator: return "NonHermitianGenerator";
    case ErrorCode::NonHermitianObservable: return "NonHermitianObservable";
    case ErrorCode::RuntimeError: return "RuntimeError";
    case ErrorCode::BackendNotFound: return "BackendNotFound";
    case ErrorCode::BackendCapabilityError: return "BackendCapabilityError";
    case ErrorCode::CacheCorruption: return "CacheCorruption";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IndentationError:
    case ErrorCode::TabSpaceMix:
    case ErrorCode::UnterminatedString:
    case ErrorCode::SyntaxError:
    case ErrorCode::MissingAnnotation:
    case ErrorCode::FirstArgNotQreg:
    case ErrorCode::UnknownKernel:
    case ErrorCode::UnknownGate:
    case ErrorCode::UndefinedName:
    case ErrorCode::ArityError:
    case ErrorCode::CyclicDependency:
    case ErrorCode::ComputeWithoutAction:
    case ErrorCode::MeasureInComputeBlock:
    case ErrorCode::ShadowedKernelName:
    case ErrorCode::UnknownSynthesisMethod:
    case ErrorCode::MalformedOperator:
      return ErrorCategory::Compile;
    case ErrorCode::BackendNotFound:
    case ErrorCode::BackendCapabilityError:
      return ErrorCategory::Backend;
    default:
      return ErrorCategory::Runtime;
  }
}

}  // namespace qk
