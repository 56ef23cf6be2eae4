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

#ifndef ETP_CRYPTO_RNG_H_
#define ETP_CRYPTO_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "common/bytes.h"
#include "crypto/bigint.h"

namespace etp::crypto {

// Deterministic SHA-256 counter-mode generator. Every randomized operation
// takes one of these explicitly so that runs replay bit-exactly from a seed.
// Not thread-safe; give each actor its own stream via Fork().
class Rng {
 public:
  explicit Rng(uint64_t seed);
  explicit Rng(ByteView seed);

  // Independent stream keyed by (this stream's key, label). Does not depend
  // on, or advance, the parent's position.
  Rng Fork(std::string_view label) const;

  void Fill(std::span<uint8_t> out);
  Bytes NextBytes(size_t n);
  uint64_t NextU64();
  // Uniform in [0, 1) with 53 bits of precision.
  double NextUnit();
  // Uniform in [0, bound); bound must be positive.
  BigInt UniformBelow(const BigInt& bound);
  // Uniform in [lo, hi).
  BigInt UniformRange(const BigInt& lo, const BigInt& hi);
  // Uniform in [0, 2^bits).
  BigInt RandomBits(unsigned bits);

 private:
  void Refill();

  std::array<uint8_t, 32> key_{};
  uint64_t counter_ = 0;
  std::array<uint8_t, 32> block_{};
  size_t used_ = 32;
};

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_RNG_H_
