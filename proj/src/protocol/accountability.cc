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

#include "protocol/accountability.h"

#include <vector>

#include "common/error.h"
#include "protocol/messages.h"
#include "protocol/toll_server.h"
#include "protocol/user_agent.h"
#include "toll/fee.h"

namespace etp::protocol {

namespace {

template <typename T>
struct Indexed {
  size_t index;
  T value;
};

// Verified views over the raw evidence, each tagged with its input index.
struct Verified {
  std::vector<Indexed<PaymentCommitment>> commitments;
  std::vector<Indexed<Receipt>> receipts;
  std::vector<Indexed<FeeSet>> fee_sets;
  std::vector<Indexed<DisputeResult>> results;
  std::vector<Indexed<DisputeBundle>> bundles;
  std::vector<Indexed<Opening>> openings;
  std::vector<Indexed<Observation>> observations;
  std::vector<Indexed<LocationLog>> logs;
};

template <typename T, typename Check>
void Collect(size_t index, const EvidenceItem& item,
             std::vector<Indexed<T>>& out, Check check) {
  try {
    T value = T::Decode(item.payload);
    if (check(value)) out.push_back({index, std::move(value)});
  } catch (const Error&) {
    // Undecodable evidence carries no weight.
  }
}

Verified VerifyAll(std::span<const EvidenceItem> evidence,
                   const PublicDirectory& dir) {
  const Group& g = dir.group;
  Verified v;
  for (size_t i = 0; i < evidence.size(); ++i) {
    const EvidenceItem& item = evidence[i];
    switch (item.kind) {
      case EvidenceKind::kPaymentCommitment:
        Collect(i, item, v.commitments, [&](const PaymentCommitment& c) {
          auto pk = dir.user_publics.find(c.user_id);
          return pk != dir.user_publics.end() &&
                 crypto::StdVerify(g, pk->second,
                                   BindingMessage(c.toll, c.fee_set_sig),
                                   c.binding_sig);
        });
        break;
      case EvidenceKind::kReceipt:
        Collect(i, item, v.receipts, [&](const Receipt& r) {
          return crypto::StdVerify(g, dir.server_public,
                                   ReceiptMessage(r.sid, r.user_id, r.cost_cents),
                                   r.server_sig);
        });
        break;
      case EvidenceKind::kFeeSet:
        Collect(i, item, v.fee_sets, [&](const FeeSet& f) {
          return crypto::StdVerify(g, dir.server_public,
                                   FeeSetMessage(f.group_id, f.sid, f.tuples),
                                   f.server_sig);
        });
        break;
      case EvidenceKind::kDisputeResult:
        Collect(i, item, v.results, [&](const DisputeResult& r) {
          return crypto::StdVerify(g, dir.authority_public, r.SignedPart(),
                                   r.authority_sig);
        });
        break;
      case EvidenceKind::kDisputeBundle:
        Collect(i, item, v.bundles, [&](const DisputeBundle& b) {
          return crypto::StdVerify(g, dir.server_public, b.SignedPart(),
                                   b.server_sig);
        });
        break;
      case EvidenceKind::kOpening:
        Collect(i, item, v.openings, [](const Opening&) { return true; });
        break;
      case EvidenceKind::kObservation: {
        std::vector<Indexed<SignedObservation>> obs;
        Collect(i, item, obs, [&](const SignedObservation& o) {
          return crypto::StdVerify(g, dir.server_public, o.SignedPart(),
                                   o.server_sig);
        });
        for (auto& o : obs) {
          v.observations.push_back({o.index, std::move(o.value.observation)});
        }
        break;
      }
      case EvidenceKind::kLocationLog:
        Collect(i, item, v.logs, [&](const LocationLog& l) {
          return crypto::StdVerify(g, dir.server_public, l.SignedPart(),
                                   l.server_sig);
        });
        break;
    }
  }
  return v;
}

bool Concerns(const Attack& attack, const std::string& user_id,
              const std::string& sid) {
  return (attack.user_id.empty() || attack.user_id == user_id) &&
         (attack.sid.empty() || attack.sid == sid);
}

Finding Accuse(Principal p, std::vector<size_t> refs) {
  return Finding{std::move(p), std::move(refs)};
}

// Authority verdict lists the user with a real toll that differs from the
// toll the user signed.
Finding FindUnderpay(const Verified& v, const Attack& attack) {
  for (const auto& [ci, c] : v.commitments) {
    if (!Concerns(attack, c.user_id, c.sid)) continue;
    for (const auto& [ri, r] : v.results) {
      if (r.sid != c.sid || r.verdict != Verdict::kResolved) continue;
      const AccusedUser* a = r.Find(c.user_id);
      if (a != nullptr && a->committed && !(a->real_toll == c.toll)) {
        return Accuse(Principal::User(c.user_id), {ri, ci});
      }
    }
  }
  return {};
}

// The verdict shows no commitment from the user. A server receipt for that
// user and session shifts the blame to the server.
Finding FindNoCommit(const Verified& v, const Attack& attack) {
  for (const auto& [ri, r] : v.results) {
    if (r.verdict != Verdict::kResolved) continue;
    for (const auto& a : r.res) {
      if (a.committed || !Concerns(attack, a.user_id, r.sid)) continue;
      for (const auto& [pi, receipt] : v.receipts) {
        if (receipt.user_id == a.user_id && receipt.sid == r.sid) {
          return Accuse(Principal::Server(), {ri, pi});
        }
      }
      return Accuse(Principal::User(a.user_id), {ri});
    }
  }
  return {};
}

// A server-signed fee tuple that differs from the public recomputation for
// a revealed (l, t).
Finding FindWrongFee(const Verified& v, const Attack& attack,
                     const PublicDirectory& dir) {
  for (const auto& [fi, f] : v.fee_sets) {
    for (const auto& [oi, o] : v.openings) {
      if (o.sid != f.sid || !Concerns(attack, o.user_id, o.sid)) continue;
      for (const auto& t : o.tuples) {
        if (t.group_id != f.group_id) continue;
        Digest h = toll::HashLocation(t.location, t.time);
        const FeeTuple* ft = f.Find(h);
        if (ft == nullptr) continue;
        int64_t fee = toll::ComputeFee(dir.policy, t.location, t.time);
        if (!(ft->enc_fee == toll::EncryptFee(dir.server_paillier, f.sid, h, fee))) {
          return Accuse(Principal::Server(), {fi, oi});
        }
      }
    }
  }
  return {};
}

// A server-submitted bundle containing a record whose group signature does
// not verify under the authority's group key.
Finding FindForgedLocation(const Verified& v, const Attack& attack,
                           const PublicDirectory& dir) {
  for (const auto& [bi, b] : v.bundles) {
    if (!attack.sid.empty() && b.sid != attack.sid) continue;
    auto gpk = dir.group_keys.find(b.group_id);
    if (gpk == dir.group_keys.end() ||
        !(gpk->second.manager_public == dir.authority_public)) {
      continue;
    }
    for (const auto& s : b.set_s) {
      if (!gs::GsVerify(dir.group, gpk->second, s.loc_hash.view(), s.signature)) {
        return Accuse(Principal::Server(), {bi});
      }
    }
  }
  return {};
}

// Either the server's bundle carries a commitment the user never signed, or
// the user's receipted cost opens the authority's real toll exactly.
Finding FindUnderreport(const Verified& v, const Attack& attack,
                        const PublicDirectory& dir) {
  for (const auto& [bi, b] : v.bundles) {
    if (!attack.sid.empty() && b.sid != attack.sid) continue;
    for (const auto& t : b.set_t) {
      auto pk = dir.user_publics.find(t.user_id);
      if (pk != dir.user_publics.end() &&
          !crypto::StdVerify(dir.group, pk->second,
                             BindingMessage(t.toll, b.fee_set_sig), t.binding_sig)) {
        return Accuse(Principal::Server(), {bi});
      }
    }
  }
  const auto& pk = dir.server_paillier;
  for (const auto& [pi, receipt] : v.receipts) {
    if (!Concerns(attack, receipt.user_id, receipt.sid)) continue;
    for (const auto& [ri, r] : v.results) {
      if (r.sid != receipt.sid || r.verdict != Verdict::kResolved) continue;
      const AccusedUser* a = r.Find(receipt.user_id);
      if (a == nullptr) continue;
      for (const auto& [oi, o] : v.openings) {
        if (o.user_id != receipt.user_id || o.sid != receipt.sid) continue;
        if (o.randomness < 1 || o.randomness >= pk.n ||
            crypto::Gcd(o.randomness, pk.n) != 1 ||
            BigInt(receipt.cost_cents) >= pk.n) {
          continue;
        }
        if (crypto::PaillierEncrypt(pk, BigInt(receipt.cost_cents), o.randomness) ==
            a->real_toll) {
          return Accuse(Principal::Server(), {ri, pi, oi});
        }
      }
    }
  }
  return {};
}

// A server-attested observation that no record of the plate owner's group
// can explain.
Finding FindObuManipulation(const Verified& v, const Attack& attack,
                            const PublicDirectory& dir) {
  for (const auto& [oi, obs] : v.observations) {
    auto owner = dir.plate_owners.find(obs.plate);
    if (owner == dir.plate_owners.end()) continue;
    if (!attack.user_id.empty() && owner->second != attack.user_id) continue;
    auto group = dir.user_groups.find(owner->second);
    if (group == dir.user_groups.end()) continue;
    for (const auto& [li, log] : v.logs) {
      if (log.group_id != group->second) continue;
      if (!attack.sid.empty() && log.sid != attack.sid) continue;
      if (!SpotCheck(obs, log.tuples, dir.spot_check).consistent) {
        return Accuse(Principal::User(owner->second), {oi, li});
      }
    }
  }
  return {};
}

}  // namespace

const char* EvidenceKindName(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::kPaymentCommitment: return "signature";
    case EvidenceKind::kReceipt: return "receipt";
    case EvidenceKind::kFeeSet: return "fee-set";
    case EvidenceKind::kDisputeResult: return "dispute-verdict";
    case EvidenceKind::kDisputeBundle: return "dispute-bundle";
    case EvidenceKind::kOpening: return "opening";
    case EvidenceKind::kObservation: return "observation";
    case EvidenceKind::kLocationLog: return "location-log";
  }
  return "unknown";
}

EvidenceKind ParseEvidenceKind(std::string_view name) {
  for (int k = 1; k <= 8; ++k) {
    auto kind = static_cast<EvidenceKind>(k);
    if (name == EvidenceKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kMalformed, "unknown evidence kind " + std::string(name));
}

const char* AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kUserUnderpay: return "beta1";
    case AttackKind::kUserNoCommit: return "beta2";
    case AttackKind::kServerWrongFee: return "beta3";
    case AttackKind::kServerForgeLocation: return "beta4";
    case AttackKind::kServerUnderreportPayment: return "beta5";
    case AttackKind::kObuManipulation: return "obu_manipulation";
  }
  return "unknown";
}

AttackKind ParseAttackKind(std::string_view name) {
  for (int k = 1; k <= 6; ++k) {
    auto kind = static_cast<AttackKind>(k);
    if (name == AttackKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kMalformed, "unknown attack kind " + std::string(name));
}

std::string Principal::ToString() const {
  switch (role) {
    case Role::kInconclusive: return "inconclusive";
    case Role::kUser: return "user:" + id;
    case Role::kServer: return "server";
    case Role::kAuthority: return "authority";
  }
  return "inconclusive";
}

Principal Principal::Parse(std::string_view text) {
  if (text == "server") return Server();
  if (text == "authority") return {Role::kAuthority, "authority"};
  if (text == "inconclusive") return Inconclusive();
  if (text.starts_with("user:") && text.size() > 5) {
    return User(std::string(text.substr(5)));
  }
  throw Error(ErrorCode::kMalformed, "bad principal " + std::string(text));
}

Finding FindWithEvidence(std::span<const EvidenceItem> evidence,
                         const Attack& attack, const PublicDirectory& directory) {
  Verified v = VerifyAll(evidence, directory);
  switch (attack.kind) {
    case AttackKind::kUserUnderpay: return FindUnderpay(v, attack);
    case AttackKind::kUserNoCommit: return FindNoCommit(v, attack);
    case AttackKind::kServerWrongFee: return FindWrongFee(v, attack, directory);
    case AttackKind::kServerForgeLocation:
      return FindForgedLocation(v, attack, directory);
    case AttackKind::kServerUnderreportPayment:
      return FindUnderreport(v, attack, directory);
    case AttackKind::kObuManipulation:
      return FindObuManipulation(v, attack, directory);
  }
  return {};
}

Principal Find(std::span<const EvidenceItem> evidence, const Attack& attack,
               const PublicDirectory& directory) {
  return FindWithEvidence(evidence, attack, directory).accused;
}

}  // namespace etp::protocol
