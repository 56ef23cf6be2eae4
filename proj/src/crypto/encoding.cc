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

#include "crypto/encoding.h"

#include <limits>

#include "common/error.h"

namespace etp::crypto {

Encoder& Encoder::Raw(ByteView bytes) {
  ETP_ENFORCE(bytes.size() <= std::numeric_limits<uint32_t>::max(),
              ErrorCode::kOutOfRange, "field too long to encode");
  uint32_t len = static_cast<uint32_t>(bytes.size());
  out_.push_back(static_cast<uint8_t>(len >> 24));
  out_.push_back(static_cast<uint8_t>(len >> 16));
  out_.push_back(static_cast<uint8_t>(len >> 8));
  out_.push_back(static_cast<uint8_t>(len));
  out_.insert(out_.end(), bytes.begin(), bytes.end());
  return *this;
}

Encoder& Encoder::Int(const BigInt& v) { return Raw(BigIntToBytes(v)); }

Encoder& Encoder::U64(uint64_t v) {
  uint8_t buf[8];
  size_t n = 0;
  for (int shift = 56; shift >= 0; shift -= 8) {
    uint8_t b = static_cast<uint8_t>(v >> shift);
    if (n == 0 && b == 0) continue;
    buf[n++] = b;
  }
  return Raw(ByteView(buf, n));
}

Encoder& Encoder::Str(std::string_view s) { return Raw(AsBytes(s)); }

ByteView Decoder::Field() {
  ETP_ENFORCE(in_.size() - pos_ >= 4, ErrorCode::kMalformed,
              "truncated length prefix");
  uint32_t len = (uint32_t{in_[pos_]} << 24) | (uint32_t{in_[pos_ + 1]} << 16) |
                 (uint32_t{in_[pos_ + 2]} << 8) | uint32_t{in_[pos_ + 3]};
  pos_ += 4;
  ETP_ENFORCE(in_.size() - pos_ >= len, ErrorCode::kMalformed,
              "truncated field");
  ByteView field = in_.subspan(pos_, len);
  pos_ += len;
  return field;
}

BigInt Decoder::Int() {
  ByteView f = Field();
  ETP_ENFORCE(f.empty() || f[0] != 0, ErrorCode::kMalformed,
              "non-minimal integer encoding");
  return BigIntFromBytes(f);
}

uint64_t Decoder::U64() {
  ByteView f = Field();
  ETP_ENFORCE(f.size() <= 8 && (f.empty() || f[0] != 0),
              ErrorCode::kMalformed, "bad u64 field");
  uint64_t v = 0;
  for (uint8_t b : f) v = (v << 8) | b;
  return v;
}

Bytes Decoder::Raw() {
  ByteView f = Field();
  return Bytes(f.begin(), f.end());
}

std::string Decoder::Str() {
  ByteView f = Field();
  return std::string(f.begin(), f.end());
}

void Decoder::ExpectEnd() const {
  ETP_ENFORCE(AtEnd(), ErrorCode::kMalformed, "trailing bytes after message");
}

}  // namespace etp::crypto
