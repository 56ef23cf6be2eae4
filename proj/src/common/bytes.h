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

#ifndef ETP_COMMON_BYTES_H_
#define ETP_COMMON_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace etp {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline Bytes ToBytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

std::string ToHex(ByteView bytes);

// Throws Error(kMalformed) on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

}  // namespace etp

#endif  // ETP_COMMON_BYTES_H_
