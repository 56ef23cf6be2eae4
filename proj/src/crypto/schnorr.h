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

#ifndef ETP_CRYPTO_SCHNORR_H_
#define ETP_CRYPTO_SCHNORR_H_

#include "common/bytes.h"
#include "crypto/group.h"
#include "crypto/rng.h"

namespace etp::crypto {

struct StdKeyPair {
  Scalar secret;
  GroupElement public_key;
};

// Schnorr signature in (challenge, response) form.
struct StdSignature {
  Scalar challenge;
  Scalar response;

  bool operator==(const StdSignature&) const = default;

  Bytes Encode() const;
  // Throws Error(kMalformed).
  static StdSignature Decode(ByteView bytes);
};

StdKeyPair StdKeygen(const Group& group, Rng& rng);

StdSignature StdSign(const Group& group, const StdKeyPair& key,
                     ByteView message, Rng& rng);

// Never throws; malformed inputs simply fail verification.
bool StdVerify(const Group& group, const GroupElement& public_key,
               ByteView message, const StdSignature& sig);

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_SCHNORR_H_
