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

#ifndef ETP_CRYPTO_PAILLIER_H_
#define ETP_CRYPTO_PAILLIER_H_

#include "crypto/bigint.h"
#include "crypto/group.h"
#include "crypto/rng.h"

namespace etp::crypto {

inline constexpr unsigned kMinTestPaillierBits = 64;
inline constexpr unsigned kMinProductionPaillierBits = 2048;

struct PaillierPublicKey {
  BigInt n;
  BigInt n_squared;

  bool operator==(const PaillierPublicKey&) const = default;
  static PaillierPublicKey FromModulus(const BigInt& n);
};

struct PaillierSecretKey {
  PaillierPublicKey public_key;
  BigInt p;
  BigInt q;
  BigInt lambda;
  BigInt mu;

  bool operator==(const PaillierSecretKey&) const = default;
  static PaillierSecretKey FromPrimes(const BigInt& p, const BigInt& q);
};

struct PaillierCiphertext {
  BigInt value;
  bool operator==(const PaillierCiphertext&) const = default;
};

struct PaillierKeyPair {
  PaillierPublicKey public_key;
  PaillierSecretKey secret_key;
};

// n has exactly `bits` bits. Rejects bits < 64, and bits < 2048 in
// production mode.
PaillierKeyPair PaillierKeygen(unsigned bits, Rng& rng,
                               SecurityMode mode = SecurityMode::kInsecureTest);

// (1+n)^m * r^n mod n^2. Requires 0 <= m < n and 1 <= r < n, gcd(r, n) = 1.
PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk,
                                   const BigInt& m, const BigInt& r);
PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk,
                                   const BigInt& m, Rng& rng);

// Throws Error(kInvalidCiphertext) if c is outside [1, n^2) or shares a
// factor with n.
BigInt PaillierDecrypt(const PaillierSecretKey& sk, const PaillierCiphertext& c);

// Homomorphic addition of plaintexts.
PaillierCiphertext PaillierMul(const PaillierPublicKey& pk,
                               const PaillierCiphertext& a,
                               const PaillierCiphertext& b);

bool IsValidCiphertext(const PaillierPublicKey& pk,
                       const PaillierCiphertext& c);

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_PAILLIER_H_
