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

#ifndef ETP_CRYPTO_BIGINT_H_
#define ETP_CRYPTO_BIGINT_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "common/bytes.h"

namespace etp::crypto {

using BigInt = mpz_class;

// Big-endian, minimal length. Zero encodes to an empty byte string.
Bytes BigIntToBytes(const BigInt& v);
BigInt BigIntFromBytes(ByteView bytes);

// Lowercase hex without prefix; zero is "0".
std::string BigIntToHex(const BigInt& v);
BigInt BigIntFromHex(std::string_view hex);

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod);
BigInt InvertMod(const BigInt& v, const BigInt& mod);
BigInt Gcd(const BigInt& a, const BigInt& b);
BigInt Lcm(const BigInt& a, const BigInt& b);
bool IsProbablePrime(const BigInt& v);

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_BIGINT_H_
