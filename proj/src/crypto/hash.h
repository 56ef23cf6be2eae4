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

#ifndef ETP_CRYPTO_HASH_H_
#define ETP_CRYPTO_HASH_H_

#include <array>
#include <cstdint>

#include "common/bytes.h"
#include "crypto/bigint.h"

namespace etp::crypto {

inline constexpr size_t kDigestSize = 32;

struct Digest {
  std::array<uint8_t, kDigestSize> bytes{};

  ByteView view() const { return bytes; }
  auto operator<=>(const Digest&) const = default;
};

// SHA-256.
Digest Hash(ByteView data);

Digest DigestFromHex(std::string_view hex);

// Maps data to [0, modulus) using 512 bits of hash output, which keeps the
// reduction bias negligible for moduli up to 256 bits.
BigInt HashToInt(ByteView data, const BigInt& modulus);

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_HASH_H_
