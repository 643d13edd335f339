// Copyright 2026 The mppsi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mppsi/error.h"

namespace mppsi {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kInvalidPartyCount:
      return "invalid-party-count";
    case ErrorCode::kFieldMismatch:
      return "field-mismatch";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kTransport:
      return "transport";
    case ErrorCode::kProtocolViolation:
      return "protocol-violation";
    case ErrorCode::kDecode:
      return "decode";
    case ErrorCode::kBoundExceeded:
      return "bound-exceeded";
  }
  return "unknown";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
      return 3;
    case ErrorCode::kTransport:
      return 4;
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kDecode:
      return 5;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidPartyCount:
    case ErrorCode::kFieldMismatch:
    case ErrorCode::kConfig:
    case ErrorCode::kBoundExceeded:
      return 2;
  }
  return 1;
}

}  // namespace mppsi
