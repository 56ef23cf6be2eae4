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

#include "crypto/bigint.h"

#include "common/error.h"

namespace etp::crypto {

Bytes BigIntToBytes(const BigInt& v) {
  ETP_ENFORCE(sgn(v) >= 0, ErrorCode::kInvalidArgument,
              "negative integers have no canonical encoding");
  if (sgn(v) == 0) return {};
  size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  Bytes out(count);
  size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

BigInt BigIntFromBytes(ByteView bytes) {
  BigInt v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

std::string BigIntToHex(const BigInt& v) { return v.get_str(16); }

BigInt BigIntFromHex(std::string_view hex) {
  ETP_ENFORCE(!hex.empty(), ErrorCode::kMalformed, "empty hex integer");
  BigInt v;
  if (v.set_str(std::string(hex), 16) != 0 || sgn(v) < 0) {
    throw Error(ErrorCode::kMalformed,
                "bad hex integer '" + std::string(hex) + "'");
  }
  return v;
}

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

BigInt InvertMod(const BigInt& v, const BigInt& mod) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kInvalidArgument, "value is not invertible");
  }
  return out;
}

BigInt Gcd(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigInt Lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

bool IsProbablePrime(const BigInt& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), 40) != 0;
}

}  // namespace etp::crypto
