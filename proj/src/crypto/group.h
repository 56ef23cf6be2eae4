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

#ifndef ETP_CRYPTO_GROUP_H_
#define ETP_CRYPTO_GROUP_H_

#include "crypto/bigint.h"
#include "crypto/rng.h"

namespace etp::crypto {

enum class SecurityMode { kInsecureTest, kProduction };

struct GroupParams {
  BigInt modulus_p;
  BigInt order_q;
  BigInt generator_g;

  bool operator==(const GroupParams&) const = default;
};

struct Scalar {
  BigInt value;
  bool operator==(const Scalar&) const = default;
};

struct GroupElement {
  BigInt value;
  bool operator==(const GroupElement&) const = default;
};

// Fixed Schnorr subgroups of Z_p*. Test: 512-bit p, 256-bit q.
// Production: 2048-bit p, 256-bit q.
const GroupParams& TestGroupParams();
const GroupParams& ProductionGroupParams();
const GroupParams& GroupParamsFor(SecurityMode mode);

// Checks q | p-1, both prime, g of exact order q. Throws Error(kInvalidArgument).
void ValidateGroupParams(const GroupParams& params);

// Arithmetic in the order-q subgroup. Cheap to copy; all methods are const.
class Group {
 public:
  explicit Group(GroupParams params);

  const GroupParams& params() const { return params_; }
  const BigInt& p() const { return params_.modulus_p; }
  const BigInt& q() const { return params_.order_q; }
  GroupElement generator() const { return {params_.generator_g}; }
  GroupElement identity() const { return {BigInt(1)}; }

  GroupElement Exp(const GroupElement& base, const Scalar& e) const;
  GroupElement ExpG(const Scalar& e) const;
  GroupElement Mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement Div(const GroupElement& a, const GroupElement& b) const;
  GroupElement Inverse(const GroupElement& a) const;
  // a^x * b^y
  GroupElement MultiExp(const GroupElement& a, const Scalar& x,
                        const GroupElement& b, const Scalar& y) const;

  // 1 <= x < p and x^q = 1.
  bool Contains(const GroupElement& x) const;
  bool IsScalar(const Scalar& s) const;

  Scalar AddScalar(const Scalar& a, const Scalar& b) const;
  Scalar SubScalar(const Scalar& a, const Scalar& b) const;
  Scalar MulScalar(const Scalar& a, const Scalar& b) const;
  Scalar NegScalar(const Scalar& a) const;

  // Uniform in [0, q) and [1, q) respectively.
  Scalar RandomScalar(Rng& rng) const;
  Scalar RandomNonZeroScalar(Rng& rng) const;
  Scalar HashToScalar(ByteView data) const;

 private:
  GroupParams params_;
};

}  // namespace etp::crypto

#endif  // ETP_CRYPTO_GROUP_H_
