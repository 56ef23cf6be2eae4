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

#ifndef ETP_PROTOCOL_ENVELOPE_H_
#define ETP_PROTOCOL_ENVELOPE_H_

#include <string>

#include "common/bytes.h"
#include "crypto/group.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"
#include "protocol/messages.h"

// Wire framing: a one-byte MessageType tag followed by canonical fields.
namespace etp::protocol {

// Authenticated channel: sealed with the sender's signature key.
struct SealedEnvelope {
  MessageType type = MessageType::kRegisterKey;
  std::string sender;
  std::string recipient;
  Bytes payload;
  StdSignature seal;

  Bytes Encode() const;
  static SealedEnvelope Decode(ByteView bytes);
  bool operator==(const SealedEnvelope&) const = default;
};

// Driving-phase channel. The type has no sender field.
struct AnonymousEnvelope {
  MessageType type = MessageType::kLocationRecord;
  Bytes payload;

  Bytes Encode() const;
  static AnonymousEnvelope Decode(ByteView bytes);
  bool operator==(const AnonymousEnvelope&) const = default;
};

SealedEnvelope Seal(const crypto::Group& group, const crypto::StdKeyPair& key,
                    MessageType type, const std::string& sender,
                    const std::string& recipient, Bytes payload,
                    crypto::Rng& rng);

bool VerifySeal(const crypto::Group& group, const GroupElement& sender_public,
                const SealedEnvelope& envelope);

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_ENVELOPE_H_
