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

#include "toll/fee.h"

#include <map>

#include "common/error.h"
#include "crypto/encoding.h"

namespace etp::toll {

namespace {

BigInt SmallestUnitFrom(const PaillierPublicKey& pk, const Bytes& kdf_input) {
  BigInt r = crypto::BigIntFromBytes(crypto::Hash(kdf_input).view()) % pk.n;
  // n-1 is always a unit, so this terminates below n.
  while (crypto::Gcd(r, pk.n) != 1) ++r;
  return r;
}

}  // namespace

BigInt DeriveFeeRandomness(const PaillierPublicKey& pk, const std::string& sid,
                           const Digest& loc_hash) {
  return SmallestUnitFrom(
      pk, crypto::Encoder().Str("fee-rand").Str(sid).Raw(loc_hash.view()).Take());
}

BigInt DeriveEmptyRandomness(const PaillierPublicKey& pk,
                             const std::string& sid,
                             const std::string& user_id) {
  return SmallestUnitFrom(
      pk, crypto::Encoder().Str("empty").Str(sid).Str(user_id).Take());
}

PaillierCiphertext EncryptFee(const PaillierPublicKey& pk,
                              const std::string& sid, const Digest& loc_hash,
                              int64_t fee_cents) {
  ETP_ENFORCE(fee_cents >= 0, ErrorCode::kOutOfRange, "negative fee");
  return crypto::PaillierEncrypt(pk, BigInt(static_cast<long>(fee_cents)),
                                 DeriveFeeRandomness(pk, sid, loc_hash));
}

PaillierCiphertext CanonicalEmptyCommitment(const PaillierPublicKey& pk,
                                            const std::string& sid,
                                            const std::string& user_id) {
  return crypto::PaillierEncrypt(pk, BigInt(0),
                                 DeriveEmptyRandomness(pk, sid, user_id));
}

std::vector<FeeTuple> MakeFeeTuples(const ChargingPolicy& policy,
                                    const TollSession& session,
                                    const std::vector<LocationTuple>& tuples,
                                    const PaillierPublicKey& pk) {
  std::map<Digest, int64_t> fees;
  BigInt total = 0;
  for (const LocationTuple& t : tuples) {
    ETP_ENFORCE(t.group_id == tuples.front().group_id,
                ErrorCode::kInvalidArgument,
                "fee tuples span more than one group");
    ETP_ENFORCE(session.Contains(t.time), ErrorCode::kOutOfRange,
                "location tuple outside session " + session.sid);
    int64_t fee = ComputeFee(policy, t.location, t.time);
    total += BigInt(static_cast<long>(fee));
    fees.emplace(HashLocation(t.location, t.time), fee);
  }
  ETP_ENFORCE(2 * total < pk.n, ErrorCode::kOutOfRange,
              "group fee total would wrap the Paillier plaintext ring");
  std::vector<FeeTuple> out;
  out.reserve(fees.size());
  for (const auto& [digest, fee] : fees) {
    out.push_back({digest, EncryptFee(pk, session.sid, digest, fee)});
  }
  return out;
}

}  // namespace etp::toll
