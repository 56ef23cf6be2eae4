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

#include "io/keys.h"

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "io/documents.h"

namespace etp::io {

using nlohmann::json;

namespace {

constexpr unsigned kTestPaillierBits = 128;

json Stamped(crypto::SecurityMode mode, json body) {
  body["mode"] = mode == crypto::SecurityMode::kProduction ? "production" : "insecure-test";
  if (mode == crypto::SecurityMode::kInsecureTest) body["stamp"] = kInsecureStamp;
  return body;
}

json KeyPairJson(const crypto::StdKeyPair& k) {
  return {{"secret", crypto::BigIntToHex(k.secret.value)},
          {"public", crypto::BigIntToHex(k.public_key.value)}};
}

class KeyFile {
 public:
  KeyFile(const std::filesystem::path& dir, std::string_view name)
      : name_(name), j_(Load(dir / name)) {}

  crypto::BigInt Int(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end() || !it->is_string()) Fail(std::string(key) + " missing");
    try {
      return crypto::BigIntFromHex(it->get<std::string>());
    } catch (const Error& e) {
      Fail(std::string(key) + ": " + e.what());
    }
  }

  crypto::SecurityMode Mode() const {
    std::string mode = j_.value("mode", "");
    bool stamped = j_.value("stamp", "") == kInsecureStamp;
    if (mode == "insecure-test" && stamped) return crypto::SecurityMode::kInsecureTest;
    if (mode == "production" && !j_.contains("stamp")) return crypto::SecurityMode::kProduction;
    Fail("mode and stamp disagree");
  }

  [[noreturn]] void Fail(const std::string& msg) const {
    throw Error(ErrorCode::kMalformed, name_ + ": " + msg);
  }

 private:
  static json Load(const std::filesystem::path& path) {
    try {
      return json::parse(ReadFile(path));
    } catch (const json::parse_error&) {
      throw Error(ErrorCode::kMalformed, path.string() + ": not valid JSON");
    }
  }

  std::string name_;
  json j_;
};

crypto::StdKeyPair ReadKeyPair(const KeyFile& f, const crypto::Group& g) {
  crypto::StdKeyPair k{{f.Int("secret")}, {f.Int("public")}};
  if (!g.IsScalar(k.secret) || g.ExpG(k.secret) != k.public_key) {
    f.Fail("public key does not match the secret");
  }
  return k;
}

}  // namespace

KeyMaterial GenerateKeys(crypto::SecurityMode mode, crypto::Rng& rng) {
  KeyMaterial k;
  k.mode = mode;
  k.group = crypto::GroupParamsFor(mode);
  crypto::Group g(k.group);
  unsigned bits = mode == crypto::SecurityMode::kProduction
                      ? crypto::kMinProductionPaillierBits
                      : kTestPaillierBits;
  crypto::Rng paillier_rng = rng.Fork("paillier");
  crypto::Rng server_rng = rng.Fork("server");
  crypto::Rng authority_rng = rng.Fork("authority");
  k.paillier = crypto::PaillierKeygen(bits, paillier_rng, mode).secret_key;
  k.server = crypto::StdKeygen(g, server_rng);
  k.authority = crypto::StdKeygen(g, authority_rng);
  return k;
}

void WriteKeys(const std::filesystem::path& dir, const KeyMaterial& keys, bool force) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  if (!force) {
    for (auto name : kKeyFiles) {
      if (std::filesystem::exists(dir / name)) {
        throw Error(ErrorCode::kDuplicate, (dir / name).string() +
                                               " exists; pass --force to overwrite");
      }
    }
  }
  const auto& p = keys.paillier;
  WriteFile(dir / kKeyFiles[0],
            Stamped(keys.mode, {{"p", crypto::BigIntToHex(keys.group.modulus_p)},
                                {"q", crypto::BigIntToHex(keys.group.order_q)},
                                {"g", crypto::BigIntToHex(keys.group.generator_g)}})
                    .dump(2) + "\n");
  WriteFile(dir / kKeyFiles[1],
            Stamped(keys.mode, {{"n", crypto::BigIntToHex(p.public_key.n)},
                                {"p", crypto::BigIntToHex(p.p)},
                                {"q", crypto::BigIntToHex(p.q)}})
                    .dump(2) + "\n");
  WriteFile(dir / kKeyFiles[2], Stamped(keys.mode, KeyPairJson(keys.server)).dump(2) + "\n");
  WriteFile(dir / kKeyFiles[3],
            Stamped(keys.mode, KeyPairJson(keys.authority)).dump(2) + "\n");
}

KeyMaterial LoadKeys(const std::filesystem::path& dir) {
  KeyMaterial k;
  KeyFile group_file(dir, kKeyFiles[0]);
  k.mode = group_file.Mode();
  k.group = {group_file.Int("p"), group_file.Int("q"), group_file.Int("g")};
  try {
    crypto::ValidateGroupParams(k.group);
  } catch (const Error& e) {
    group_file.Fail(e.what());
  }
  if (k.mode == crypto::SecurityMode::kProduction &&
      mpz_sizeinbase(k.group.modulus_p.get_mpz_t(), 2) < 2048) {
    group_file.Fail("production group modulus below 2048 bits");
  }
  crypto::Group g(k.group);

  KeyFile paillier_file(dir, kKeyFiles[1]);
  if (paillier_file.Mode() != k.mode) paillier_file.Fail("mode differs from group.json");
  crypto::BigInt n = paillier_file.Int("n");
  crypto::BigInt p = paillier_file.Int("p");
  crypto::BigInt q = paillier_file.Int("q");
  if (p * q != n || !crypto::IsProbablePrime(p) || !crypto::IsProbablePrime(q)) {
    paillier_file.Fail("n is not the product of the two primes");
  }
  k.paillier = crypto::PaillierSecretKey::FromPrimes(p, q);

  KeyFile server_file(dir, kKeyFiles[2]);
  KeyFile authority_file(dir, kKeyFiles[3]);
  if (server_file.Mode() != k.mode || authority_file.Mode() != k.mode) {
    server_file.Fail("mode differs from group.json");
  }
  k.server = ReadKeyPair(server_file, g);
  k.authority = ReadKeyPair(authority_file, g);
  return k;
}

}  // namespace etp::io
