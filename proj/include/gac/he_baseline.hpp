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

// Hybrid-encryption baseline: gk is wrapped once per member under that
// member's own X25519 public key. Metadata grows linearly with the group and
// every revocation re-wraps a fresh gk for all remaining members.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gac/bytes.hpp"
#include "gac/group_manager.hpp"
#include "gac/metadata_store.hpp"
#include "gac/rng.hpp"
#include "gac/sealing.hpp"
#include "gac/symmetric.hpp"

namespace gac::he {

using RawKey = std::array<std::uint8_t, 32>;

struct MemberKeyPair {
    std::string identity;
    RawKey public_key{};
    RawKey private_key{};
};

MemberKeyPair generate_keypair(std::string identity, Rng& rng);

/// identity -> keypair, standing in for a PKI. On disk: one line per member,
/// `identity<TAB>public-hex<TAB>private-hex`; '#' starts a comment line.
class KeyDirectory {
  public:
    void insert(MemberKeyPair kp);
    /// Generates and stores keys for every identity not yet present.
    void ensure(std::span<const std::string> identities, Rng& rng);

    [[nodiscard]] bool contains(std::string_view identity) const;
    /// Throws Error(key_lookup) for unknown identities.
    [[nodiscard]] const MemberKeyPair& at(std::string_view identity) const;
    [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }

    static KeyDirectory load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

  private:
    std::map<std::string, MemberKeyPair, std::less<>> keys_;
};

/// ephemeral public key (32) || nonce (12) || tag (16) || wrapped gk (32)
inline constexpr std::size_t kWrappedSize = 32 + aead::kOverhead + 32;

/// ECIES-style wrap: X25519 with a fresh ephemeral key, SHA-256 KDF, AES-256-GCM.
Bytes wrap(const RawKey& recipient_public, const GroupKey& gk, ByteView aad, Rng& rng);
/// Throws Error(authentication_failed) when the blob was not made for this key.
GroupKey unwrap(const MemberKeyPair& recipient, ByteView blob, ByteView aad);

struct HEEntry {
    std::string identity;
    Bytes wrapped_gk;
};

struct HEGroupMetadata {
    std::string group_id;
    std::uint64_t version = 0;
    SealedBlob sealed_gk;
    std::vector<HEEntry> entries;

    [[nodiscard]] const HEEntry* find(std::string_view identity) const;
    [[nodiscard]] std::size_t member_count() const noexcept { return entries.size(); }
    /// Sum of the per-member wraps.
    [[nodiscard]] std::size_t envelope_bytes() const noexcept { return entries.size() * kWrappedSize; }

    [[nodiscard]] Bytes serialize() const;
    static HEGroupMetadata deserialize(ByteView in);
};

/// Metadata bytes of an n-member group without building it.
constexpr std::size_t envelope_bytes_for(std::size_t members) noexcept { return members * kWrappedSize; }

/// The directory must outlive the admin.
class HEAdmin {
  public:
    HEAdmin(const KeyDirectory& directory, Sealer sealer) : dir_(&directory), sealer_(sealer) {}

    /// Throws Error(key_lookup) when a member has no public key.
    [[nodiscard]] HEGroupMetadata create_group(std::string group_id, std::span<const std::string> members,
                                               Rng& rng) const;
    [[nodiscard]] HEGroupMetadata add_user(const HEGroupMetadata& meta, std::string_view user, Rng& rng) const;
    [[nodiscard]] HEGroupMetadata remove_user(const HEGroupMetadata& meta, std::string_view user, Rng& rng) const;

  private:
    [[nodiscard]] HEEntry wrap_for(std::string_view group_id, std::string_view user, const GroupKey& gk,
                                   Rng& rng) const;

    const KeyDirectory* dir_;
    Sealer sealer_;
};

/// Throws Error(not_a_member), or Error(stale_metadata) if the entry does not open.
GroupKey client_decrypt(const MemberKeyPair& keys, const HEGroupMetadata& meta);

/// Single-level layout: everything lives in `<group>/group.meta`.
void store_group(MetadataStore& store, const HEGroupMetadata& meta);
HEGroupMetadata load_group(const MetadataStore& store, std::string_view group_id);

}  // namespace gac::he
