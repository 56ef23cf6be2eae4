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

#include "common/bytes.h"
#include "common/error.h"

namespace etp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kOutOfRange: return "out of range";
    case ErrorCode::kInvalidCiphertext: return "invalid ciphertext";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kNotFound: return "not found";
    case ErrorCode::kVerificationFailed: return "verification failed";
    case ErrorCode::kUnknownRosterVersion: return "unknown roster version";
    case ErrorCode::kUntraceable: return "untraceable signature";
    case ErrorCode::kProtocolAbort: return "protocol abort";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "io error";
    case ErrorCode::kMalformed: return "malformed input";
  }
  return "unknown";
}

std::string ToHex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes FromHex(std::string_view hex) {
  ETP_ENFORCE(hex.size() % 2 == 0, ErrorCode::kMalformed, "odd-length hex");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    ETP_ENFORCE(hi >= 0 && lo >= 0, ErrorCode::kMalformed,
                "non-hex character in '" + std::string(hex) + "'");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace etp
