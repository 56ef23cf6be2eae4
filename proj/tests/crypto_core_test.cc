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

#include <set>

#include <gtest/gtest.h>

#include "common/error.h"
#include "crypto/bigint.h"
#include "crypto/encoding.h"
#include "crypto/group.h"
#include "crypto/hash.h"
#include "crypto/paillier.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"

namespace etp::crypto {
namespace {

// Independent Paillier routes: generic (n+1)^m exponentiation for encryption
// and a phi-based decryption instead of the lambda/mu closed form.
BigInt OracleEncrypt(const BigInt& n, const BigInt& m, const BigInt& r) {
  BigInt n2 = n * n;
  BigInt c = PowMod(n + 1, m, n2) * PowMod(r, n, n2);
  return BigInt(c % n2);
}

BigInt OracleDecrypt(const BigInt& p, const BigInt& q, const BigInt& c) {
  BigInt n = p * q;
  BigInt phi = (p - 1) * (q - 1);
  BigInt u = PowMod(c, phi, n * n);
  BigInt l = (u - 1) / n;
  BigInt m = l * InvertMod(phi, n);
  return BigInt(m % n);
}

TEST(HashTest, MatchesPublishedVectors) {
  EXPECT_EQ(ToHex(Hash({}).view()),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ToHex(Hash(AsBytes("abc")).view()),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(
      ToHex(Hash(AsBytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))
                .view()),
      "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(HashTest, DeterministicAndSensitiveToAppendedZero) {
  Rng rng(7);
  std::set<Bytes> inputs;
  std::set<Digest> seen;
  for (int i = 0; i < 1000; ++i) {
    Bytes x = rng.NextBytes(rng.NextU64() % 64);
    EXPECT_EQ(Hash(x), Hash(x));
    Bytes y = x;
    y.push_back(0);
    EXPECT_NE(Hash(x), Hash(y));
    inputs.insert(y);
    seen.insert(Hash(y));
  }
  // Distinct inputs never collided.
  EXPECT_EQ(seen.size(), inputs.size());
}

TEST(EncodingTest, IntegersAreMinimalBigEndianWithLengthPrefix) {
  EXPECT_EQ(Encoder().Int(BigInt(0)).bytes(), (Bytes{0, 0, 0, 0}));
  EXPECT_EQ(Encoder().Int(BigInt(0x0102)).bytes(), (Bytes{0, 0, 0, 2, 1, 2}));
  EXPECT_EQ(Encoder().Str("ab").U64(256).bytes(),
            (Bytes{0, 0, 0, 2, 'a', 'b', 0, 0, 0, 2, 1, 0}));
}

TEST(EncodingTest, DecoderRejectsNonMinimalAndTrailing) {
  Bytes padded{0, 0, 0, 2, 0, 5};
  Decoder d(padded);
  EXPECT_THROW(d.Int(), Error);
  Bytes trailing = Encoder().Int(BigInt(5)).Take();
  trailing.push_back(9);
  Decoder d2(trailing);
  EXPECT_EQ(d2.Int(), 5);
  EXPECT_THROW(d2.ExpectEnd(), Error);
  Bytes truncated{0, 0, 0, 9, 1};
  EXPECT_THROW(Decoder(truncated).Raw(), Error);
}

TEST(EncodingTest, RoundTripProperty) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    BigInt v = rng.RandomBits(static_cast<unsigned>(rng.NextU64() % 700));
    uint64_t u = rng.NextU64();
    std::string s(rng.NextU64() % 20, 'x');
    Bytes enc = Encoder().Int(v).U64(u).Str(s).Take();
    Decoder d(enc);
    EXPECT_EQ(d.Int(), v);
    EXPECT_EQ(d.U64(), u);
    EXPECT_EQ(d.Str(), s);
    d.ExpectEnd();
  }
}

TEST(RngTest, SeededStreamsReplay) {
  Rng a(42), b(42), c(43);
  EXPECT_EQ(a.NextBytes(100), b.NextBytes(100));
  EXPECT_NE(Rng(42).NextBytes(32), c.NextBytes(32));
  Rng parent(1);
  Rng f1 = parent.Fork("server");
  parent.NextBytes(10);
  Rng f2 = parent.Fork("server");
  EXPECT_EQ(f1.NextU64(), f2.NextU64());
  EXPECT_NE(parent.Fork("server").NextU64(), parent.Fork("authority").NextU64());
}

TEST(RngTest, UniformBelowStaysInRange) {
  Rng rng(3);
  BigInt bound(1000);
  for (int i = 0; i < 2000; ++i) {
    BigInt v = rng.UniformBelow(bound);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, bound);
  }
  double u = rng.NextUnit();
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
}

TEST(GroupTest, FixedParametersAreValid) {
  EXPECT_NO_THROW(ValidateGroupParams(TestGroupParams()));
  EXPECT_NO_THROW(ValidateGroupParams(ProductionGroupParams()));
  EXPECT_EQ(mpz_sizeinbase(TestGroupParams().modulus_p.get_mpz_t(), 2), 512u);
  EXPECT_EQ(mpz_sizeinbase(ProductionGroupParams().modulus_p.get_mpz_t(), 2),
            2048u);
  GroupParams bad = TestGroupParams();
  bad.generator_g = 2;
  EXPECT_THROW(ValidateGroupParams(bad), Error);
}

TEST(GroupTest, ClosureUnderMulAndExp) {
  Group group(TestGroupParams());
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    GroupElement a = group.ExpG(group.RandomScalar(rng));
    GroupElement b = group.ExpG(group.RandomScalar(rng));
    EXPECT_TRUE(group.Contains(group.Mul(a, b)));
    EXPECT_TRUE(group.Contains(group.Exp(a, group.RandomScalar(rng))));
    EXPECT_TRUE(group.Contains(group.Div(a, b)));
  }
  EXPECT_FALSE(group.Contains({BigInt(0)}));
  EXPECT_FALSE(group.Contains({group.p()}));
}

TEST(StdSignatureTest, KeygenSatisfiesDefiningEquation) {
  Group group(TestGroupParams());
  std::set<std::string> secrets;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    StdKeyPair key = StdKeygen(group, rng);
    EXPECT_EQ(key.public_key, group.ExpG(key.secret));
    EXPECT_GE(key.secret.value, 1);
    EXPECT_LT(key.secret.value, group.q());
    secrets.insert(key.secret.value.get_str(16));
  }
  EXPECT_EQ(secrets.size(), 100u);
}

TEST(StdSignatureTest, SignVerifyAndBindings) {
  Group group(TestGroupParams());
  Rng rng(9);
  StdKeyPair key = StdKeygen(group, rng);
  StdKeyPair other = StdKeygen(group, rng);
  Bytes msg = ToBytes("location fee set");
  StdSignature sig = StdSign(group, key, msg, rng);
  EXPECT_TRUE(StdVerify(group, key.public_key, msg, sig));
  Bytes flipped = msg;
  flipped[0] ^= 1;
  EXPECT_FALSE(StdVerify(group, key.public_key, flipped, sig));
  EXPECT_FALSE(StdVerify(group, other.public_key, msg, sig));
  EXPECT_FALSE(StdVerify(group, key.public_key, ToBytes("other"), sig));
  EXPECT_EQ(StdSignature::Decode(sig.Encode()), sig);
}

TEST(StdSignatureTest, ZeroResponseFails) {
  Group group(TestGroupParams());
  Rng rng(10);
  StdKeyPair key = StdKeygen(group, rng);
  for (int i = 0; i < 20; ++i) {
    Bytes msg = rng.NextBytes(24);
    StdSignature sig = StdSign(group, key, msg, rng);
    sig.response.value = 0;
    EXPECT_FALSE(StdVerify(group, key.public_key, msg, sig));
  }
}

TEST(StdSignatureTest, SingleBitMutationsFail) {
  Group group(TestGroupParams());
  Rng rng(12);
  StdKeyPair key = StdKeygen(group, rng);
  Bytes msg = rng.NextBytes(40);
  StdSignature sig = StdSign(group, key, msg, rng);
  Bytes sig_bytes = sig.Encode();
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    bool mutate_message = i % 2 == 0;
    Bytes m = msg;
    Bytes s = sig_bytes;
    Bytes& target = mutate_message ? m : s;
    size_t bit = rng.NextU64() % (target.size() * 8);
    target[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    bool ok = false;
    try {
      ok = StdVerify(group, key.public_key, m, StdSignature::Decode(s));
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) ++failures;
  }
  EXPECT_EQ(failures, 1000);
}

TEST(PaillierTest, KeygenSizesAndDeterminism) {
  Rng rng(1);
  PaillierKeyPair kp = PaillierKeygen(64, rng);
  EXPECT_EQ(mpz_sizeinbase(kp.public_key.n.get_mpz_t(), 2), 64u);
  EXPECT_NE(kp.secret_key.p, kp.secret_key.q);
  BigInt r(12345);
  PaillierCiphertext c = PaillierEncrypt(kp.public_key, BigInt(5), r);
  EXPECT_EQ(c.value, OracleEncrypt(kp.public_key.n, BigInt(5), r));
  EXPECT_EQ(OracleDecrypt(kp.secret_key.p, kp.secret_key.q, c.value), 5);
  EXPECT_EQ(PaillierDecrypt(kp.secret_key, c), 5);

  Rng rng2(1);
  EXPECT_EQ(PaillierKeygen(64, rng2).secret_key, kp.secret_key);
  EXPECT_THROW(PaillierKeygen(63, rng), Error);
  EXPECT_THROW(PaillierKeygen(1024, rng, SecurityMode::kProduction), Error);
}

TEST(PaillierTest, EncryptionEdgeCases) {
  Rng rng(2);
  PaillierKeyPair kp = PaillierKeygen(64, rng);
  const auto& pk = kp.public_key;
  const auto& sk = kp.secret_key;
  EXPECT_EQ(PaillierDecrypt(sk, PaillierEncrypt(pk, BigInt(0), BigInt(3))), 0);
  EXPECT_NE(PaillierEncrypt(pk, BigInt(9), BigInt(3)),
            PaillierEncrypt(pk, BigInt(9), BigInt(5)));
  EXPECT_EQ(PaillierEncrypt(pk, BigInt(9), BigInt(3)),
            PaillierEncrypt(pk, BigInt(9), BigInt(3)));
  EXPECT_EQ(PaillierDecrypt(sk, PaillierEncrypt(pk, BigInt(7), rng)), 7);
  BigInt top = pk.n - 1;
  EXPECT_EQ(PaillierDecrypt(sk, PaillierEncrypt(pk, top, rng)), top);

  EXPECT_THROW(PaillierEncrypt(pk, pk.n, BigInt(3)), Error);
  EXPECT_THROW(PaillierEncrypt(pk, BigInt(1), sk.p), Error);
  try {
    PaillierDecrypt(sk, {sk.p});
    FAIL() << "expected invalid ciphertext";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCiphertext);
  }
}

TEST(PaillierTest, MulAddsPlaintexts) {
  Rng rng(4);
  PaillierKeyPair kp = PaillierKeygen(64, rng);
  const auto& pk = kp.public_key;
  const auto& sk = kp.secret_key;
  auto c3 = PaillierEncrypt(pk, BigInt(3), rng);
  auto c4 = PaillierEncrypt(pk, BigInt(4), rng);
  EXPECT_EQ(PaillierDecrypt(sk, PaillierMul(pk, c3, c4)), 7);
  auto zero = PaillierEncrypt(pk, BigInt(0), BigInt(17));
  EXPECT_EQ(PaillierDecrypt(sk, PaillierMul(pk, c3, zero)), 3);

  for (int trial = 0; trial < 1000; ++trial) {
    int k = 1 + static_cast<int>(rng.NextU64() % 8);
    BigInt sum = 0;
    PaillierCiphertext acc = PaillierEncrypt(pk, BigInt(0), BigInt(1));
    for (int i = 0; i < k; ++i) {
      BigInt m = rng.UniformBelow(pk.n);
      sum += m;
      acc = PaillierMul(pk, acc, PaillierEncrypt(pk, m, rng));
    }
    BigInt expected = sum % pk.n;
    ASSERT_EQ(PaillierDecrypt(sk, acc), expected);
    ASSERT_EQ(OracleDecrypt(sk.p, sk.q, acc.value), expected);
  }
}

}  // namespace
}  // namespace etp::crypto
