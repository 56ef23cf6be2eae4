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

#ifndef ETP_CRYPTO_ENCODING_H_
#define ETP_CRYPTO_ENCODING_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "common/bytes.h"
#include "crypto/bigint.h"

namespace etp::crypto {

// Canonical encoding shared by every hashed or signed message: each field is
// a 4-byte big-endian length followed by its content. Integers are
// big-endian minimal-length, strings are UTF-8, fields appear in declared
// order.
class Encoder {
 public:
  Encoder& Int(const BigInt& v);
  Encoder& U64(uint64_t v);
  Encoder& Raw(ByteView bytes);
  Encoder& Str(std::string_view s);
  Encoder& Nested(const Encoder& inner) { return Raw(inner.bytes()); }

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reads fields back in the order they were written. Every accessor throws
// Error(kMalformed) on truncation or trailing garbage.
class Decoder {
 public:
  explicit Decoder(ByteView bytes) : in_(bytes) {}

  BigInt Int();
  uint64_t U64();
  Bytes Raw();
  std::string Str();
  bool AtEnd() const { return pos_ == in_.size(); }
  void ExpectEnd() const;

 private:
  ByteView Field();

  ByteView in_;
  size_t pos_ = 0;
};

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_ENCODING_H_
