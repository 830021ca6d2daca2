// Copyright 2026 The sctk Authors.
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

#include "sctk/error.h"

namespace sctk {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kUnsupportedDatatype:
      return "unsupported_datatype";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kDimension:
      return "dimension";
    case ErrorCode::kPairing:
      return "pairing";
    case ErrorCode::kDegenerateInput:
      return "degenerate_input";
    case ErrorCode::kInsufficientData:
      return "insufficient_data";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kUsage:
      return "usage";
    case ErrorCode::kConfig:
      return "config";
  }
  return "unknown";
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sctk
