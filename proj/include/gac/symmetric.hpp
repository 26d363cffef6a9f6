/*
   Copyright 2026 The gac Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>

#include "gac/bytes.hpp"
#include "gac/rng.hpp"

namespace gac {

using Key256 = std::array<std::uint8_t, 32>;
using Digest256 = std::array<std::uint8_t, 32>;

Digest256 sha256(ByteView data);

/// The symmetric group key gk shared by all members of a group.
struct GroupKey {
    Key256 bytes{};

    static GroupKey random(Rng& rng);
    friend bool operator==(const GroupKey&, const GroupKey&) = default;
};

/// AES-256-GCM with a fresh random 96-bit nonce per call.
/// Blob layout: nonce (12) || tag (16) || ciphertext.
namespace aead {

inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kOverhead = kNonceSize + kTagSize;

Bytes seal(const Key256& key, ByteView plaintext, ByteView associated_data, Rng& rng);
/// Throws Error(authentication_failed) on any mismatch.
Bytes open(const Key256& key, ByteView blob, ByteView associated_data);
/// Nonce stored at the front of a blob.
ByteView nonce_of(ByteView blob);

}  // namespace aead

}  // namespace gac
