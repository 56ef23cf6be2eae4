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

#include "crypto/rng.h"

#include <algorithm>

#include "common/error.h"
#include "crypto/encoding.h"
#include "crypto/hash.h"

namespace etp::crypto {

Rng::Rng(uint64_t seed) {
  key_ = Hash(Encoder().Str("etp/rng/seed").U64(seed).bytes()).bytes;
}

Rng::Rng(ByteView seed) {
  key_ = Hash(Encoder().Str("etp/rng/bytes").Raw(seed).bytes()).bytes;
}

Rng Rng::Fork(std::string_view label) const {
  return Rng(Encoder().Str("etp/rng/fork").Raw(key_).Str(label).bytes());
}

void Rng::Refill() {
  block_ = Hash(Encoder().Raw(key_).U64(counter_++).bytes()).bytes;
  used_ = 0;
}

void Rng::Fill(std::span<uint8_t> out) {
  size_t pos = 0;
  while (pos < out.size()) {
    if (used_ == block_.size()) Refill();
    size_t n = std::min(out.size() - pos, block_.size() - used_);
    std::copy_n(block_.begin() + used_, n, out.begin() + pos);
    used_ += n;
    pos += n;
  }
}

Bytes Rng::NextBytes(size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

uint64_t Rng::NextU64() {
  uint8_t buf[8];
  Fill(buf);
  uint64_t v = 0;
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

double Rng::NextUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

BigInt Rng::RandomBits(unsigned bits) {
  Bytes raw = NextBytes((bits + 7) / 8);
  if (bits % 8 != 0 && !raw.empty()) {
    raw[0] &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
  }
  return BigIntFromBytes(raw);
}

BigInt Rng::UniformBelow(const BigInt& bound) {
  ETP_ENFORCE(sgn(bound) > 0, ErrorCode::kInvalidArgument,
              "uniform bound must be positive");
  unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    BigInt v = RandomBits(bits);
    if (v < bound) return v;
  }
}

BigInt Rng::UniformRange(const BigInt& lo, const BigInt& hi) {
  ETP_ENFORCE(lo < hi, ErrorCode::kInvalidArgument, "empty range");
  return lo + UniformBelow(hi - lo);
}

}  // namespace etp::crypto
