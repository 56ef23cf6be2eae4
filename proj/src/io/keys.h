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

#ifndef ETP_IO_KEYS_H_
#define ETP_IO_KEYS_H_

#include <array>
#include <filesystem>
#include <string_view>

#include "crypto/group.h"
#include "crypto/paillier.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"

namespace etp::io {

inline constexpr std::string_view kInsecureStamp = "INSECURE-TEST";

inline constexpr std::array<std::string_view, 4> kKeyFiles = {
    "group.json", "server_paillier.json", "server_signing.json",
    "authority_signing.json"};

struct KeyMaterial {
  crypto::SecurityMode mode = crypto::SecurityMode::kInsecureTest;
  crypto::GroupParams group;
  crypto::PaillierSecretKey paillier;
  crypto::StdKeyPair server;
  crypto::StdKeyPair authority;
};

// Test mode uses 512-bit group and 128-bit Paillier; production 2048/2048.
KeyMaterial GenerateKeys(crypto::SecurityMode mode, crypto::Rng& rng);

// Throws Error(kDuplicate) if any key file exists and force is false.
void WriteKeys(const std::filesystem::path& dir, const KeyMaterial& keys, bool force);

// Checks the stamp against the mode, the group parameters, p*q = n and
// every public key against its secret. Throws Error(kMalformed).
KeyMaterial LoadKeys(const std::filesystem::path& dir);

}  // namespace etp::io

#endif  // ETP_IO_KEYS_H_
