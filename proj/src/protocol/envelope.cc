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

#include "protocol/envelope.h"

#include <algorithm>
#include <utility>

#include "common/error.h"
#include "crypto/encoding.h"

namespace etp::protocol {

using crypto::Decoder;
using crypto::Encoder;

namespace {

MessageType ParseTag(ByteView bytes) {
  ETP_ENFORCE(!bytes.empty(), ErrorCode::kMalformed, "empty envelope");
  uint8_t tag = bytes[0];
  ETP_ENFORCE(tag >= 1 && tag <= 11, ErrorCode::kMalformed,
              "unknown message type " + std::to_string(tag));
  return static_cast<MessageType>(tag);
}

Bytes SealMessage(MessageType type, const std::string& sender,
                  const std::string& recipient, ByteView payload) {
  return Encoder()
      .Str("etp/envelope")
      .U64(static_cast<uint8_t>(type))
      .Str(sender)
      .Str(recipient)
      .Raw(payload)
      .Take();
}

Bytes Tagged(MessageType type, const Bytes& body) {
  Bytes out(body.size() + 1);
  out[0] = static_cast<uint8_t>(type);
  std::copy(body.begin(), body.end(), out.begin() + 1);
  return out;
}

}  // namespace

Bytes SealedEnvelope::Encode() const {
  Encoder e;
  e.Str(sender).Str(recipient).Raw(payload).Raw(seal.Encode());
  return Tagged(type, e.bytes());
}

SealedEnvelope SealedEnvelope::Decode(ByteView bytes) {
  SealedEnvelope env;
  env.type = ParseTag(bytes);
  Decoder d(bytes.subspan(1));
  env.sender = d.Str();
  env.recipient = d.Str();
  env.payload = d.Raw();
  env.seal = StdSignature::Decode(d.Raw());
  d.ExpectEnd();
  return env;
}

Bytes AnonymousEnvelope::Encode() const {
  Encoder e;
  e.Raw(payload);
  return Tagged(type, e.bytes());
}

AnonymousEnvelope AnonymousEnvelope::Decode(ByteView bytes) {
  AnonymousEnvelope env;
  env.type = ParseTag(bytes);
  Decoder d(bytes.subspan(1));
  env.payload = d.Raw();
  d.ExpectEnd();
  return env;
}

SealedEnvelope Seal(const crypto::Group& group, const crypto::StdKeyPair& key,
                    MessageType type, const std::string& sender,
                    const std::string& recipient, Bytes payload,
                    crypto::Rng& rng) {
  SealedEnvelope env{type, sender, recipient, std::move(payload), {}};
  env.seal = crypto::StdSign(group, key,
                             SealMessage(type, sender, recipient, env.payload), rng);
  return env;
}

bool VerifySeal(const crypto::Group& group, const GroupElement& sender_public,
                const SealedEnvelope& envelope) {
  return crypto::StdVerify(
      group, sender_public,
      SealMessage(envelope.type, envelope.sender, envelope.recipient,
                  envelope.payload),
      envelope.seal);
}

}  // namespace etp::protocol
