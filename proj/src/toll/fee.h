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

#ifndef ETP_TOLL_FEE_H_
#define ETP_TOLL_FEE_H_

#include <string>
#include <vector>

#include "crypto/hash.h"
#include "crypto/paillier.h"
#include "toll/location.h"
#include "toll/policy.h"

namespace etp::toll {

using crypto::BigInt;
using crypto::Digest;
using crypto::PaillierCiphertext;
using crypto::PaillierPublicKey;

struct FeeTuple {
  Digest loc_hash;
  PaillierCiphertext enc_fee;

  bool operator==(const FeeTuple&) const = default;
};

// Encryption randomness for fee ciphertexts is publicly derivable so that any
// principal holding (l, t) can recompute E_S(f(l, t)) bit-exactly:
// the smallest r >= H("fee-rand" || sid || h(l,t)) mod n with gcd(r, n) = 1.
BigInt DeriveFeeRandomness(const PaillierPublicKey& pk, const std::string& sid,
                           const Digest& loc_hash);

// Same rule keyed by ("empty", sid, user_id); used for users with no travel.
BigInt DeriveEmptyRandomness(const PaillierPublicKey& pk,
                             const std::string& sid,
                             const std::string& user_id);

PaillierCiphertext EncryptFee(const PaillierPublicKey& pk,
                              const std::string& sid, const Digest& loc_hash,
                              int64_t fee_cents);

// E_S(0) under the empty-travel randomness.
PaillierCiphertext CanonicalEmptyCommitment(const PaillierPublicKey& pk,
                                            const std::string& sid,
                                            const std::string& user_id);

// One fee tuple per distinct (l, t), sorted by loc_hash bytes. All tuples
// must belong to one group and lie inside the session window. Throws
// Error(kOutOfRange) if the fee sum could wrap the plaintext ring
// (sum >= n/2).
std::vector<FeeTuple> MakeFeeTuples(const ChargingPolicy& policy,
                                    const TollSession& session,
                                    const std::vector<LocationTuple>& tuples,
                                    const PaillierPublicKey& pk);

}  // namespace etp::toll

#endif  // ETP_TOLL_FEE_H_
