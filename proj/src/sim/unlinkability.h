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

#ifndef ETP_SIM_UNLINKABILITY_H_
#define ETP_SIM_UNLINKABILITY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.h"
#include "protocol/toll_server.h"

namespace etp::sim {

struct ViewField {
  std::string name;
  Bytes value;

  bool operator==(const ViewField&) const = default;
};

// One stored driving-phase record as the server holds it, field by field.
struct ViewRecord {
  std::string group_id;
  std::vector<ViewField> fields;

  const ViewField* Field(std::string_view name) const;
  bool operator==(const ViewRecord&) const = default;
};

struct ServerView {
  std::vector<ViewRecord> records;              // storage order
  std::map<std::string, Bytes> fee_sets;        // group -> encoded fee set

  bool operator==(const ServerView&) const = default;
};

ViewRecord ViewOf(const protocol::LocationRecord& record);
ServerView CaptureServerView(const protocol::TollServer& server,
                             const std::string& sid);

// Values that would identify a user if they appeared in the server view.
struct Identifiers {
  std::map<std::string, std::vector<Bytes>> by_user;
};

struct UnlinkabilityReport {
  // (a) no identifier appears in any stored field
  bool identifiers_absent = true;
  std::vector<std::string> identifier_hits;
  // (b) no non-constant signature field repeats across one member's records
  bool fields_fresh = true;
  uint64_t repeated_fields = 0;
  // (c) location-swap comparison, when a swapped run is supplied
  std::optional<bool> swap_equivalent;
  std::string swap_detail;
  std::map<std::string, uint64_t> anonymity_sets;
  std::vector<std::string> singleton_groups;

  bool passed() const {
    return identifiers_absent && fields_fresh && swap_equivalent.value_or(true);
  }
};

// (a) Field-level scan. Field names naming a principal count as hits too.
std::vector<std::string> ScanForIdentifiers(const ServerView& view,
                                            const Identifiers& ids);

// (b) signer_of maps each record's location field to its true signer.
uint64_t CountRepeatedFields(const ServerView& view,
                             const std::map<std::string, std::string>& signer_of);

// (c) The two views must hold the same tuples and identical records except
// for those whose location field is in swapped. Fee sets must be equal.
bool SwapEquivalent(const ServerView& a, const ServerView& b,
                    const std::vector<std::string>& swapped, std::string* detail);

}  // namespace etp::sim

#endif  // ETP_SIM_UNLINKABILITY_H_
