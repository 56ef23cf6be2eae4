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

#include "sim/unlinkability.h"

#include <algorithm>
#include <set>

#include "crypto/bigint.h"
#include "toll/location.h"

namespace etp::sim {

namespace {

Bytes IntBytes(const crypto::BigInt& v) { return crypto::BigIntToBytes(v); }

// Fields that are the same for every record of a group or carry the
// location itself.
bool IsConstantField(const std::string& name) {
  return name == "location" || name == "group_id" || name == "sig.group_id" ||
         name == "sig.roster_version";
}

bool Contains(const Bytes& hay, const Bytes& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

std::string LocationKey(const ViewRecord& r) {
  const ViewField* f = r.Field("location");
  return r.group_id + "/" + (f == nullptr ? "" : std::string(f->value.begin(), f->value.end()));
}

}  // namespace

const ViewField* ViewRecord::Field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ViewRecord ViewOf(const protocol::LocationRecord& record) {
  ViewRecord v;
  v.group_id = record.tuple.group_id;
  const auto& t = record.tuple;
  const auto& s = record.signature;
  v.fields.push_back({"location", ToBytes(toll::CanonicalLocationText(t.location, t.time))});
  v.fields.push_back({"group_id", ToBytes(t.group_id)});
  v.fields.push_back({"sig.group_id", ToBytes(s.group_id)});
  v.fields.push_back({"sig.roster_version", ToBytes(std::to_string(s.roster_version))});
  v.fields.push_back({"sig.t1", IntBytes(s.escrow_t1.value)});
  v.fields.push_back({"sig.t2", IntBytes(s.escrow_t2.value)});
  for (size_t j = 0; j < s.clauses.size(); ++j) {
    std::string p = "sig.clause" + std::to_string(j);
    v.fields.push_back({p + ".c", IntBytes(s.clauses[j].challenge.value)});
    v.fields.push_back({p + ".zr", IntBytes(s.clauses[j].response_r.value)});
    v.fields.push_back({p + ".zs", IntBytes(s.clauses[j].response_s.value)});
  }
  return v;
}

ServerView CaptureServerView(const protocol::TollServer& server,
                             const std::string& sid) {
  ServerView view;
  for (const auto& g : server.GroupIds()) {
    for (const auto& r : server.StoredRecords(g, sid)) view.records.push_back(ViewOf(r));
    if (const auto* fs = server.PublishedFees(g, sid)) view.fee_sets[g] = fs->Encode();
  }
  return view;
}

std::vector<std::string> ScanForIdentifiers(const ServerView& view,
                                            const Identifiers& ids) {
  std::vector<std::string> hits;
  for (size_t i = 0; i < view.records.size(); ++i) {
    for (const auto& f : view.records[i].fields) {
      std::string where = "record " + std::to_string(i) + " field " + f.name;
      for (const char* banned : {"sender", "user", "plate", "owner"}) {
        if (f.name.find(banned) != std::string::npos) {
          hits.push_back(where + ": identifying field name");
        }
      }
      for (const auto& [user, values] : ids.by_user) {
        for (const auto& id : values) {
          if (id.empty()) continue;
          bool hit = f.value == id || (id.size() >= 16 && Contains(f.value, id));
          if (hit) hits.push_back(where + ": identifies " + user);
        }
      }
    }
  }
  return hits;
}

uint64_t CountRepeatedFields(const ServerView& view,
                             const std::map<std::string, std::string>& signer_of) {
  std::map<std::string, std::set<Bytes>> seen;
  uint64_t repeats = 0;
  for (const auto& r : view.records) {
    auto signer = signer_of.find(LocationKey(r));
    if (signer == signer_of.end()) continue;  // forged or foreign record
    auto& values = seen[signer->second];
    for (const auto& f : r.fields) {
      if (IsConstantField(f.name)) continue;
      if (!values.insert(f.value).second) ++repeats;
    }
  }
  return repeats;
}

bool SwapEquivalent(const ServerView& a, const ServerView& b,
                    const std::vector<std::string>& swapped, std::string* detail) {
  auto fail = [detail](std::string why) {
    if (detail != nullptr) *detail = std::move(why);
    return false;
  };
  if (a.fee_sets != b.fee_sets) return fail("fee sets differ");
  if (a.records.size() != b.records.size()) return fail("record counts differ");
  std::map<std::string, const ViewRecord*> index_b;
  for (const auto& r : b.records) index_b[LocationKey(r)] = &r;
  std::set<std::string> swap_keys;
  for (const auto& r : a.records) {
    const ViewField* loc = r.Field("location");
    if (loc == nullptr) continue;
    std::string text(loc->value.begin(), loc->value.end());
    if (std::find(swapped.begin(), swapped.end(), text) != swapped.end()) {
      swap_keys.insert(LocationKey(r));
    }
  }
  if (swap_keys.size() != swapped.size()) return fail("swapped tuples not all stored");
  for (const auto& r : a.records) {
    auto it = index_b.find(LocationKey(r));
    if (it == index_b.end()) return fail("tuple " + LocationKey(r) + " missing");
    bool is_swapped = swap_keys.contains(LocationKey(r));
    if (!is_swapped && !(*it->second == r)) {
      return fail("unswapped record " + LocationKey(r) + " differs");
    }
  }
  if (detail != nullptr) {
    *detail = "identical except " + std::to_string(swap_keys.size()) + " swapped records";
  }
  return true;
}

}  // namespace etp::sim
