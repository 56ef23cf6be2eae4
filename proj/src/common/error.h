// Copyright 2026 The ETP Authors
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

#ifndef ETP_COMMON_ERROR_H_
#define ETP_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace etp {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kInvalidCiphertext,
  kDuplicate,
  kNotFound,
  kVerificationFailed,
  kUnknownRosterVersion,
  kUntraceable,
  kProtocolAbort,
  kConfig,
  kIo,
  kMalformed,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this type. The C API maps the
// code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define ETP_ENFORCE(cond, code, msg)            \
  do {                                          \
    if (!(cond)) throw ::etp::Error((code), (msg)); \
  } while (0)

}  // namespace etp

#endif  // ETP_COMMON_ERROR_H_
