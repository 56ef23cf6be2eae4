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

#include "crypto/group.h"

#include "common/error.h"
#include "crypto/hash.h"

namespace etp::crypto {

namespace {

GroupParams MakeParams(const char* p, const char* q, const char* g) {
  return {BigIntFromHex(p), BigIntFromHex(q), BigIntFromHex(g)};
}

}  // namespace

const GroupParams& TestGroupParams() {
  static const GroupParams kParams = MakeParams(
      "80269e0a706e20c41d5b76586e82954479d2ab9395a00f93ffe8b33110b2cafd300ce2"
      "96d09f4fc5196a0c1ce913d57bb5adcfb55626d572b96f50d5f9183a73",
      "805975f79a9dc8e09d9e34e2aff49f210b0c7797e6a78f6355275d5ab55b6e2d",
      "9abe8550a79c226d1df47f877e6739b35648265e44636068b5a5a7f7cb9f459f653561"
      "685c24ad061f9c0a02a7908d1e685e3bd612fc55d01a8cf76b9fe4c38");
  return kParams;
}

const GroupParams& ProductionGroupParams() {
  static const GroupParams kParams = MakeParams(
      "8fc2403d077a62c2b71edd4421ad88327f0ee64bfeb6c16199c52629df5e682e52e432"
      "10715696c033a09caee32bd4b9ddda48231fa154da04d1683255e8e9b869669f1f5794"
      "754274c15b842757d8b6bc29fb0cd38d827cc995a3580ab22fa13fdf3c62ba250e2289"
      "d79c0ba535339dad43444a04371b391fca645ea4db8a8282c14703a25fbd185cdc5e0b"
      "61755dbf36d2ef91034f292eef3549f794999454e2f7b06f1535ae37531a5e36338058"
      "1baf3a182d92577bb94cc6c38e01f70ebdf5f2cce8401b536329c1c8c7f41d5a3212c1"
      "a2aaeda97203fc59b324b02580f0e0c701cf4eeba1c6c991a8bfbf3a3645df4ca6d97b"
      "7523f82e974770f010b0bd",
      "d2c6adbf6a0183dcbe28c166693909c18abd15c18c109f60448fa18d67df8889",
      "25b8dfc339582443b42280a43c60d57d15d831076a713c1761d1843c83766940fe6a9c"
      "3d0d2a9b2bf0fea1b571fbc3a458a87221bda4c354e8f20fa605c2e807e9a473f43642"
      "881074da3100d74b35dee5bce2de8ebf9b26ccc8a3ecdda2ecdf48214c8967ba90d9c3"
      "8ae60ff343381467a080770a8236efe837fcc01a018f94fa19922a74997ffbaedbd739"
      "119b3a5ee935f49c67bd6a2ec45e16f888d1a27e54265a10a80d83328727538fb00321"
      "de275504c04a5a2149cba90e0cc461260202698b15e96589d870ef65d8f30e4c04576c"
      "3e56963580a2b096744c7585fc7daaa50d7b0f4f650720745fd418c00bc932ce0e20af"
      "b90aecd1c2cbc7d2f0600f");
  return kParams;
}

const GroupParams& GroupParamsFor(SecurityMode mode) {
  return mode == SecurityMode::kProduction ? ProductionGroupParams()
                                           : TestGroupParams();
}

void ValidateGroupParams(const GroupParams& params) {
  const BigInt& p = params.modulus_p;
  const BigInt& q = params.order_q;
  const BigInt& g = params.generator_g;
  ETP_ENFORCE(p > 3 && IsProbablePrime(p), ErrorCode::kInvalidArgument,
              "group modulus is not prime");
  ETP_ENFORCE(q > 1 && IsProbablePrime(q), ErrorCode::kInvalidArgument,
              "group order is not prime");
  ETP_ENFORCE((p - 1) % q == 0, ErrorCode::kInvalidArgument,
              "q does not divide p-1");
  ETP_ENFORCE(g > 1 && g < p, ErrorCode::kInvalidArgument,
              "generator out of range");
  ETP_ENFORCE(PowMod(g, q, p) == 1, ErrorCode::kInvalidArgument,
              "generator does not have order q");
}

Group::Group(GroupParams params) : params_(std::move(params)) {}

GroupElement Group::Exp(const GroupElement& base, const Scalar& e) const {
  return {PowMod(base.value, e.value, p())};
}

GroupElement Group::ExpG(const Scalar& e) const {
  return {PowMod(params_.generator_g, e.value, p())};
}

GroupElement Group::Mul(const GroupElement& a, const GroupElement& b) const {
  BigInt v = a.value * b.value;
  v %= p();
  return {v};
}

GroupElement Group::Inverse(const GroupElement& a) const {
  return {InvertMod(a.value, p())};
}

GroupElement Group::Div(const GroupElement& a, const GroupElement& b) const {
  return Mul(a, Inverse(b));
}

GroupElement Group::MultiExp(const GroupElement& a, const Scalar& x,
                             const GroupElement& b, const Scalar& y) const {
  return Mul(Exp(a, x), Exp(b, y));
}

bool Group::Contains(const GroupElement& x) const {
  if (x.value < 1 || x.value >= p()) return false;
  return PowMod(x.value, q(), p()) == 1;
}

bool Group::IsScalar(const Scalar& s) const {
  return s.value >= 0 && s.value < q();
}

Scalar Group::AddScalar(const Scalar& a, const Scalar& b) const {
  BigInt v = a.value + b.value;
  v %= q();
  return {v};
}

Scalar Group::SubScalar(const Scalar& a, const Scalar& b) const {
  BigInt v = a.value - b.value;
  v %= q();
  if (v < 0) v += q();
  return {v};
}

Scalar Group::MulScalar(const Scalar& a, const Scalar& b) const {
  BigInt v = a.value * b.value;
  v %= q();
  return {v};
}

Scalar Group::NegScalar(const Scalar& a) const {
  return SubScalar({BigInt(0)}, a);
}

Scalar Group::RandomScalar(Rng& rng) const { return {rng.UniformBelow(q())}; }

Scalar Group::RandomNonZeroScalar(Rng& rng) const {
  return {rng.UniformRange(BigInt(1), q())};
}

Scalar Group::HashToScalar(ByteView data) const {
  return {HashToInt(data, q())};
}

}  // namespace etp::crypto
