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

#include "crypto/schnorr.h"

#include "crypto/encoding.h"

namespace etp::crypto {

namespace {

Scalar Challenge(const Group& group, const GroupElement& public_key,
                 const GroupElement& commitment, ByteView message) {
  return group.HashToScalar(Encoder()
                                .Str("etp/schnorr/challenge")
                                .Int(public_key.value)
                                .Int(commitment.value)
                                .Raw(message)
                                .bytes());
}

}  // namespace

Bytes StdSignature::Encode() const {
  return Encoder().Int(challenge.value).Int(response.value).Take();
}

StdSignature StdSignature::Decode(ByteView bytes) {
  Decoder d(bytes);
  StdSignature sig;
  sig.challenge.value = d.Int();
  sig.response.value = d.Int();
  d.ExpectEnd();
  return sig;
}

StdKeyPair StdKeygen(const Group& group, Rng& rng) {
  StdKeyPair key;
  key.secret = group.RandomNonZeroScalar(rng);
  key.public_key = group.ExpG(key.secret);
  return key;
}

StdSignature StdSign(const Group& group, const StdKeyPair& key,
                     ByteView message, Rng& rng) {
  // Nonce mixes the secret and message with fresh randomness, so a weak rng
  // alone cannot repeat a nonce across different messages.
  Bytes fresh = rng.NextBytes(32);
  Scalar nonce;
  for (uint64_t attempt = 0; nonce.value == 0; ++attempt) {
    nonce = group.HashToScalar(Encoder()
                                   .Str("etp/schnorr/nonce")
                                   .Int(key.secret.value)
                                   .Raw(message)
                                   .Raw(fresh)
                                   .U64(attempt)
                                   .bytes());
  }
  GroupElement commitment = group.ExpG(nonce);
  StdSignature sig;
  sig.challenge = Challenge(group, key.public_key, commitment, message);
  sig.response =
      group.AddScalar(nonce, group.MulScalar(sig.challenge, key.secret));
  return sig;
}

bool StdVerify(const Group& group, const GroupElement& public_key,
               ByteView message, const StdSignature& sig) {
  if (!group.IsScalar(sig.challenge) || !group.IsScalar(sig.response)) {
    return false;
  }
  if (!group.Contains(public_key) || public_key == group.identity()) {
    return false;
  }
  GroupElement commitment =
      group.MultiExp(group.generator(), sig.response, public_key,
                     group.NegScalar(sig.challenge));
  return Challenge(group, public_key, commitment, message) == sig.challenge;
}

}  // namespace etp::crypto
