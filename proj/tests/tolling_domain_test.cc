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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "common/error.h"
#include "crypto/encoding.h"
#include "crypto/paillier.h"
#include "toll/fee.h"
#include "toll/location.h"
#include "toll/policy.h"

namespace etp::toll {
namespace {

using crypto::Rng;

ChargingPolicy SimplePolicy() {
  ChargingPolicy p;
  p.grid_cell_micro = 10'000;
  p.default_rate_cents = 0;
  p.zone_rates["4850:-225"] = 100;
  p.peak_windows.push_back({8, 10, 150});
  return p;
}

TEST(LocationTest, CanonicalTextExamples) {
  EXPECT_EQ(CanonicalLocationText({0, 0}, 0), "0.000000|0.000000|0");
  EXPECT_EQ(CanonicalLocationText(Location::FromDegrees(48.5, -2.25), 60),
            "48.500000|-2.250000|60");
  EXPECT_EQ(CanonicalLocationText({-500'000, 180'000'000}, 1),
            "-0.500000|180.000000|1");
  EXPECT_EQ(CanonicalLocationText({-90'000'000, -1}, 7),
            "-90.000000|-0.000001|7");
}

TEST(LocationTest, ParseFormatRoundTrip) {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    Location loc{
        static_cast<int64_t>(rng.NextU64() % 180'000'001) - 90'000'000,
        static_cast<int64_t>(rng.NextU64() % 360'000'001) - 180'000'000};
    int64_t t = static_cast<int64_t>(rng.NextU64() % 4'000'000'000ULL);
    auto [back, bt] = ParseCanonicalLocation(CanonicalLocationText(loc, t));
    ASSERT_EQ(back, loc);
    ASSERT_EQ(bt, t);
  }
}

TEST(LocationTest, ParseRejectsNonCanonical) {
  EXPECT_THROW(ParseCanonicalLocation("48.5|-2.25|60"), Error);
  EXPECT_THROW(ParseCanonicalLocation("-0.000000|0.000000|0"), Error);
  EXPECT_THROW(ParseCanonicalLocation("91.000000|0.000000|0"), Error);
  EXPECT_THROW(ParseCanonicalLocation("1.000000|0.000000"), Error);
  EXPECT_THROW(ParseCanonicalLocation("1.000000|0.000000|-4"), Error);
  EXPECT_EQ(ParseFixed6("48.5"), 48'500'000);
  EXPECT_EQ(ParseFixed6("-2.25"), -2'250'000);
  EXPECT_THROW(ParseFixed6("1.1234567"), Error);
}

TEST(LocationTest, HashLocation) {
  Location loc = Location::FromDegrees(48.85, 2.35);
  EXPECT_EQ(HashLocation(loc, 100), HashLocation(loc, 100));
  EXPECT_EQ(HashLocation(loc, 100).bytes.size(), 32u);
  for (int64_t t = 0; t < 200; ++t) {
    EXPECT_NE(HashLocation(loc, t), HashLocation(loc, t + 1));
  }
  EXPECT_EQ(HashLocation(loc, 5), crypto::Hash(AsBytes("48.850000|2.350000|5")));
}

TEST(LocationTest, PlanarDistance) {
  Location a = Location::FromDegrees(0, 0);
  Location b = Location::FromDegrees(0.001, 0);
  EXPECT_NEAR(PlanarDistanceMeters(a, b), 111.195, 0.01);
  EXPECT_DOUBLE_EQ(PlanarDistanceMeters(a, a), 0.0);
  Location c = Location::FromDegrees(60, 0);
  Location d = Location::FromDegrees(60, 0.002);
  EXPECT_NEAR(PlanarDistanceMeters(c, d), 111.195, 0.05);
}

TEST(PolicyTest, ComputeFee) {
  ChargingPolicy p = SimplePolicy();
  Location zone = Location::FromDegrees(48.505, -2.245);
  ASSERT_EQ(ZoneOf(p, zone), "4850:-225");
  int64_t off_peak = 3 * 3600;
  int64_t peak = 9 * 3600 + 59;
  EXPECT_EQ(ComputeFee(p, zone, off_peak), 100);
  EXPECT_EQ(ComputeFee(p, zone, peak), 150);
  EXPECT_EQ(ComputeFee(p, Location::FromDegrees(10, 10), peak), 0);
  p.zone_rates["4850:-225"] = 33;
  EXPECT_EQ(ComputeFee(p, zone, peak), 49);  // floor(33 * 1.5)
}

TEST(PolicyTest, PeakWindowWrapAndValidation) {
  PeakWindow night{22, 2, 120};
  EXPECT_TRUE(night.Covers(23));
  EXPECT_TRUE(night.Covers(1));
  EXPECT_FALSE(night.Covers(2));
  ChargingPolicy p = SimplePolicy();
  EXPECT_NO_THROW(p.Validate());
  p.peak_windows.push_back({1, 3, 90});
  EXPECT_THROW(p.Validate(), Error);
  p = SimplePolicy();
  p.zone_rates["x"] = -1;
  EXPECT_THROW(p.Validate(), Error);
}

class FeeTest : public ::testing::Test {
 protected:
  Rng rng_{31};
  crypto::PaillierKeyPair keys_ = crypto::PaillierKeygen(64, rng_);
  TollSession session_{"S1", 0, 24 * 3600};
};

TEST_F(FeeTest, DerivedRandomnessIsDeterministicUnit) {
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) {
    crypto::Digest d = crypto::Hash(rng_.NextBytes(8));
    BigInt r = DeriveFeeRandomness(keys_.public_key, "S1", d);
    EXPECT_EQ(r, DeriveFeeRandomness(keys_.public_key, "S1", d));
    EXPECT_EQ(crypto::Gcd(r, keys_.public_key.n), 1);
    seen.insert(r.get_str(16));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST_F(FeeTest, DerivedRandomnessSkipsNonUnits) {
  // Tiny modulus: hash outputs that land on multiples of p or q get bumped.
  auto sk = crypto::PaillierSecretKey::FromPrimes(BigInt(11), BigInt(13));
  for (int i = 0; i < 200; ++i) {
    crypto::Digest d = crypto::Hash(rng_.NextBytes(8));
    BigInt r = DeriveFeeRandomness(sk.public_key, "S", d);
    BigInt raw = crypto::BigIntFromBytes(
                     crypto::Hash(crypto::Encoder().Str("fee-rand").Str("S").Raw(d.view()).bytes()).view()) %
                 sk.public_key.n;
    EXPECT_GE(r, raw);
    EXPECT_EQ(crypto::Gcd(r, sk.public_key.n), 1);
    for (BigInt x = raw; x < r; ++x) EXPECT_NE(crypto::Gcd(x, sk.public_key.n), 1);
  }
}

TEST_F(FeeTest, MakeFeeTuples) {
  ChargingPolicy p = SimplePolicy();
  p.default_rate_cents = 7;
  EXPECT_TRUE(MakeFeeTuples(p, session_, {}, keys_.public_key).empty());

  std::vector<LocationTuple> tuples{
      {Location::FromDegrees(48.505, -2.245), 3600, "G"},
      {Location::FromDegrees(48.505, -2.245), 9 * 3600, "G"},
      {Location::FromDegrees(1, 1), 9 * 3600, "G"},
  };
  std::vector<int64_t> expected{100, 150, 10};
  auto fee_tuples = MakeFeeTuples(p, session_, tuples, keys_.public_key);
  ASSERT_EQ(fee_tuples.size(), 3u);
  for (size_t i = 0; i < tuples.size(); ++i) {
    crypto::Digest h = HashLocation(tuples[i].location, tuples[i].time);
    auto it = std::find_if(fee_tuples.begin(), fee_tuples.end(),
                           [&](const FeeTuple& f) { return f.loc_hash == h; });
    ASSERT_NE(it, fee_tuples.end());
    EXPECT_EQ(crypto::PaillierDecrypt(keys_.secret_key, it->enc_fee),
              expected[i]);
    EXPECT_EQ(it->enc_fee,
              EncryptFee(keys_.public_key, "S1", h, expected[i]));
  }
  EXPECT_TRUE(std::is_sorted(
      fee_tuples.begin(), fee_tuples.end(),
      [](const FeeTuple& a, const FeeTuple& b) { return a.loc_hash < b.loc_hash; }));

  std::vector<LocationTuple> shuffled{tuples[2], tuples[0], tuples[1], tuples[0]};
  EXPECT_EQ(MakeFeeTuples(p, session_, shuffled, keys_.public_key), fee_tuples);

  auto other_group = tuples;
  other_group[1].group_id = "H";
  EXPECT_THROW(MakeFeeTuples(p, session_, other_group, keys_.public_key), Error);
  auto late = tuples;
  late[0].time = session_.end_time;
  EXPECT_THROW(MakeFeeTuples(p, session_, late, keys_.public_key), Error);
}

TEST_F(FeeTest, RejectsSumsThatWouldWrap) {
  auto sk = crypto::PaillierSecretKey::FromPrimes(BigInt(1009), BigInt(1013));
  ChargingPolicy p;
  p.default_rate_cents = 300'000;
  std::vector<LocationTuple> one{{Location::FromDegrees(1, 1), 10, "G"}};
  EXPECT_NO_THROW(MakeFeeTuples(p, session_, one, sk.public_key));
  auto two = one;
  two.push_back({Location::FromDegrees(2, 2), 10, "G"});
  EXPECT_THROW(MakeFeeTuples(p, session_, two, sk.public_key), Error);
}

TEST_F(FeeTest, EmptyCommitmentDecryptsToZero) {
  auto c = CanonicalEmptyCommitment(keys_.public_key, "S1", "u1");
  EXPECT_EQ(crypto::PaillierDecrypt(keys_.secret_key, c), 0);
  EXPECT_EQ(c, CanonicalEmptyCommitment(keys_.public_key, "S1", "u1"));
  EXPECT_NE(c, CanonicalEmptyCommitment(keys_.public_key, "S1", "u2"));
}

}  // namespace
}  // namespace etp::toll
