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

#pragma once

#include <stdexcept>
#include <string>

namespace mppsi {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidPartyCount,
  kFieldMismatch,
  kConfig,
  kInfeasible,
  kTransport,
  kProtocolViolation,
  kDecode,
  kBoundExceeded,
};

const char* ErrorCodeName(ErrorCode code);

// Process exit status used by the command line tool for each error class.
int ExitCodeFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Throw(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mppsi
