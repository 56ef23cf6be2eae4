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

#include "crypto/paillier.h"

#include "common/error.h"

namespace etp::crypto {

namespace {

// Random prime with exactly `bits` bits and the top two bits set, so the
// product of two such primes has exactly the sum of their lengths.
BigInt RandomPrime(unsigned bits, Rng& rng) {
  for (;;) {
    BigInt candidate = rng.RandomBits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (IsProbablePrime(candidate)) return candidate;
  }
}

}  // namespace

PaillierPublicKey PaillierPublicKey::FromModulus(const BigInt& n) {
  ETP_ENFORCE(n > 3, ErrorCode::kInvalidArgument, "Paillier modulus too small");
  return {n, n * n};
}

PaillierSecretKey PaillierSecretKey::FromPrimes(const BigInt& p,
                                                const BigInt& q) {
  ETP_ENFORCE(p != q, ErrorCode::kInvalidArgument,
              "Paillier primes must differ");
  PaillierSecretKey sk;
  sk.public_key = PaillierPublicKey::FromModulus(p * q);
  sk.p = p;
  sk.q = q;
  BigInt phi = (p - 1) * (q - 1);
  ETP_ENFORCE(Gcd(sk.public_key.n, phi) == 1, ErrorCode::kInvalidArgument,
              "gcd(n, phi(n)) != 1");
  sk.lambda = Lcm(p - 1, q - 1);
  // With g = n+1, L(g^lambda mod n^2) = lambda mod n.
  sk.mu = InvertMod(sk.lambda % sk.public_key.n, sk.public_key.n);
  return sk;
}

PaillierKeyPair PaillierKeygen(unsigned bits, Rng& rng, SecurityMode mode) {
  ETP_ENFORCE(bits >= kMinTestPaillierBits, ErrorCode::kInvalidArgument,
              "Paillier modulus must be at least 64 bits");
  if (mode == SecurityMode::kProduction) {
    ETP_ENFORCE(bits >= kMinProductionPaillierBits,
                ErrorCode::kInvalidArgument,
                "production mode requires a 2048-bit Paillier modulus");
  }
  unsigned p_bits = (bits + 1) / 2;
  unsigned q_bits = bits - p_bits;
  for (;;) {
    BigInt p = RandomPrime(p_bits, rng);
    BigInt q = RandomPrime(q_bits, rng);
    if (p == q) continue;
    if (Gcd(p * q, (p - 1) * (q - 1)) != 1) continue;
    PaillierSecretKey sk = PaillierSecretKey::FromPrimes(p, q);
    return {sk.public_key, sk};
  }
}

bool IsValidCiphertext(const PaillierPublicKey& pk,
                       const PaillierCiphertext& c) {
  return c.value >= 1 && c.value < pk.n_squared && Gcd(c.value, pk.n) == 1;
}

PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk,
                                   const BigInt& m, const BigInt& r) {
  ETP_ENFORCE(m >= 0 && m < pk.n, ErrorCode::kOutOfRange,
              "plaintext outside [0, n)");
  ETP_ENFORCE(r >= 1 && r < pk.n && Gcd(r, pk.n) == 1,
              ErrorCode::kInvalidArgument,
              "encryption randomness must be a unit mod n");
  BigInt gm = 1 + m * pk.n;  // (1+n)^m mod n^2
  BigInt c = gm * PowMod(r, pk.n, pk.n_squared);
  c %= pk.n_squared;
  return {c};
}

PaillierCiphertext PaillierEncrypt(const PaillierPublicKey& pk,
                                   const BigInt& m, Rng& rng) {
  for (;;) {
    BigInt r = rng.UniformRange(BigInt(1), pk.n);
    if (Gcd(r, pk.n) == 1) return PaillierEncrypt(pk, m, r);
  }
}

BigInt PaillierDecrypt(const PaillierSecretKey& sk,
                       const PaillierCiphertext& c) {
  const PaillierPublicKey& pk = sk.public_key;
  ETP_ENFORCE(IsValidCiphertext(pk, c), ErrorCode::kInvalidCiphertext,
              "ciphertext is not a unit mod n^2");
  BigInt u = PowMod(c.value, sk.lambda, pk.n_squared);
  BigInt l = (u - 1) / pk.n;
  BigInt m = l * sk.mu;
  m %= pk.n;
  return m;
}

PaillierCiphertext PaillierMul(const PaillierPublicKey& pk,
                               const PaillierCiphertext& a,
                               const PaillierCiphertext& b) {
  BigInt v = a.value * b.value;
  v %= pk.n_squared;
  return {v};
}

}  // namespace etp::crypto
