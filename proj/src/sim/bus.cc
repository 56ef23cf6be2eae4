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

#include "sim/bus.h"

#include <algorithm>
#include <utility>

#include "common/error.h"
#include "crypto/hash.h"

namespace etp::sim {

using protocol::AnonymousEnvelope;
using protocol::MessageType;
using protocol::SealedEnvelope;

const char* PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kSetup: return "setup";
    case Phase::kDriving: return "driving";
    case Phase::kTollCalculation: return "toll_calculation";
    case Phase::kDispute: return "dispute";
  }
  return "unknown";
}

Bytes Bus::Deliver(Phase phase, const SealedEnvelope& envelope,
                   const protocol::GroupElement& sender_public) {
  SealedEnvelope received = SealedEnvelope::Decode(envelope.Encode());
  ETP_ENFORCE(protocol::VerifySeal(group_, sender_public, received),
              ErrorCode::kVerificationFailed,
              "envelope from " + received.sender + " failed authentication");
  ++counts_[PhaseName(phase)][protocol::MessageTypeName(received.type)];
  return std::move(received.payload);
}

std::vector<protocol::LocationRecord> Bus::Mix(
    const std::vector<protocol::LocationRecord>& batch) {
  std::vector<std::pair<crypto::Digest, Bytes>> wire;
  wire.reserve(batch.size());
  for (const auto& record : batch) {
    Bytes bytes = AnonymousEnvelope{MessageType::kLocationRecord, record.Encode()}.Encode();
    wire.emplace_back(crypto::Hash(bytes), std::move(bytes));
  }
  std::sort(wire.begin(), wire.end());
  std::vector<protocol::LocationRecord> out;
  out.reserve(wire.size());
  for (const auto& [h, bytes] : wire) {
    AnonymousEnvelope env = AnonymousEnvelope::Decode(bytes);
    out.push_back(protocol::LocationRecord::Decode(env.payload));
    ++counts_[PhaseName(Phase::kDriving)][protocol::MessageTypeName(env.type)];
  }
  return out;
}

}  // namespace etp::sim
