// Copyright 2026 The LA3D Authors
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

#include "error.hpp"

namespace la3d {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kUnknownPreset: return "unknown_preset";
    case ErrorCode::kInputUnreadable: return "input_unreadable";
    case ErrorCode::kOutputUnwritable: return "output_unwritable";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kFormat: return "format_error";
    case ErrorCode::kDetectorUnavailable: return "detector_unavailable";
    case ErrorCode::kContractViolation: return "contract_violation";
    case ErrorCode::kDegenerateInput: return "degenerate_input";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace la3d
