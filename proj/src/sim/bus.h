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

#ifndef ETP_SIM_BUS_H_
#define ETP_SIM_BUS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "protocol/envelope.h"
#include "protocol/messages.h"

namespace etp::sim {

enum class Phase : uint8_t { kSetup, kDriving, kTollCalculation, kDispute };

const char* PhaseName(Phase phase);

// phase name -> message type name -> count
using MessageCounts = std::map<std::string, std::map<std::string, uint64_t>>;

// In-memory transport. Every message is serialized and re-parsed so the wire
// format is exercised on each hop.
class Bus {
 public:
  explicit Bus(protocol::Group group) : group_(std::move(group)) {}

  // Authenticated channel. Throws Error(kVerificationFailed) if the seal does
  // not verify under sender_public. Returns the delivered payload.
  Bytes Deliver(Phase phase, const protocol::SealedEnvelope& envelope,
                const protocol::GroupElement& sender_public);

  // Anonymous channel. Releases a batch in the order of the envelope
  // hashes, which is independent of the senders.
  std::vector<protocol::LocationRecord> Mix(
      const std::vector<protocol::LocationRecord>& batch);

  const MessageCounts& counts() const { return counts_; }

 private:
  protocol::Group group_;
  MessageCounts counts_;
};

}  // namespace etp::sim

#endif  // ETP_SIM_BUS_H_
