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

#include "crypto/hash.h"

#include <openssl/evp.h>

#include <algorithm>

#include "common/error.h"

namespace etp::crypto {

Digest Hash(ByteView data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != kDigestSize) {
    throw Error(ErrorCode::kInvalidArgument, "SHA-256 failed");
  }
  return d;
}

Digest DigestFromHex(std::string_view hex) {
  Bytes raw = FromHex(hex);
  ETP_ENFORCE(raw.size() == kDigestSize, ErrorCode::kMalformed,
              "digest must be 32 bytes");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

BigInt HashToInt(ByteView data, const BigInt& modulus) {
  Bytes buf;
  buf.reserve(data.size() + 1);
  buf.push_back(0);
  buf.insert(buf.end(), data.begin(), data.end());
  Bytes wide;
  for (uint8_t counter = 0; counter < 2; ++counter) {
    buf[0] = counter;
    Digest d = Hash(buf);
    wide.insert(wide.end(), d.bytes.begin(), d.bytes.end());
  }
  BigInt v = BigIntFromBytes(wide);
  return v % modulus;
}

}  // namespace etp::crypto
