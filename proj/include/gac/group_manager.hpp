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

// Partitioned group-key management on top of the master-secret IBBE mode.
//
// A group is split into fixed-capacity partitions. Each partition carries
// its own broadcast ciphertext c_p and an envelope y_p = AEAD(sha256(b_p), gk)
// of the one group key. Membership operations run inside GroupAdmin, which
// plays the role of the enclave: it alone holds the MSK and sees gk in the
// clear. Clients only need PK, their user key and one partition record.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gac/bytes.hpp"
#include "gac/ibbe.hpp"
#include "gac/metadata_store.hpp"
#include "gac/rng.hpp"
#include "gac/sealing.hpp"
#include "gac/symmetric.hpp"

namespace gac {

struct SealedBlob {
    Bytes data;
    friend bool operator==(const SealedBlob&, const SealedBlob&) = default;
};

struct Partition {
    std::uint64_t id = 0;
    std::vector<std::string> members;
    ibbe::BroadcastCiphertext ciphertext;
    /// y_p: nonce || tag || AES-256-GCM(sha256(b_p), gk)
    Bytes wrapped_gk;

    [[nodiscard]] Bytes serialize() const;
    static Partition deserialize(ByteView in);
};

struct GroupMetadata {
    std::string group_id;
    std::size_t partition_size = 0;
    /// Incremented by exactly one on every mutation.
    std::uint64_t version = 0;
    /// Partition ids are never reused.
    std::uint64_t next_partition_id = 0;
    SealedBlob sealed_gk;
    std::vector<Partition> partitions;
    /// member -> hosting partition id
    std::map<std::string, std::uint64_t, std::less<>> index;

    [[nodiscard]] const Partition* find_partition(std::string_view member) const;
    [[nodiscard]] std::size_t member_count() const noexcept { return index.size(); }
    [[nodiscard]] std::vector<std::size_t> occupancies() const;
    /// Bytes of cryptographic metadata: every (c_p, y_p) plus the sealed gk.
    [[nodiscard]] std::size_t envelope_bytes() const;

    /// The group record: everything except the partition bodies.
    [[nodiscard]] Bytes serialize_group_record() const;
    /// Rebuilds metadata from a group record and its partition records.
    static GroupMetadata assemble(ByteView group_record, std::span<const Partition> partitions);
};

/// Every violated structural invariant, empty when consistent: the index is
/// a bijection onto partition slots, occupancy is within [1, partition_size],
/// members and partition ids are unique.
std::vector<std::string> check_invariants(const GroupMetadata& meta);

/// Occupancy trigger for rebuilding a group. A partition is sparse when
/// members * occupancy_den < occupancy_num * partition_size. Repartitioning
/// fires when sparse * partitions_den > partitions_num * |P| (more than half
/// of the partitions are below two thirds full, by default) and a rebuild
/// would actually produce fewer partitions.
struct RepartitionPolicy {
    std::size_t occupancy_num = 2;
    std::size_t occupancy_den = 3;
    std::size_t partitions_num = 1;
    std::size_t partitions_den = 2;
};

bool repartition_needed(std::span<const std::size_t> occupancies, std::size_t partition_size,
                        const RepartitionPolicy& policy = {});

/// Simulated trust boundary for administrators.
class GroupAdmin {
  public:
    GroupAdmin(ibbe::MasterSecretKey msk, ibbe::PublicKey pk, Sealer sealer, RepartitionPolicy policy = {});

    /// Restores an admin from a sealed MSK produced by seal_master_key().
    static GroupAdmin from_sealed(ByteView sealed_msk, ibbe::PublicKey pk, Sealer sealer,
                                  RepartitionPolicy policy = {});
    [[nodiscard]] Bytes seal_master_key(Rng& rng) const;

    [[nodiscard]] const ibbe::PublicKey& public_key() const noexcept { return pk_; }
    [[nodiscard]] const RepartitionPolicy& policy() const noexcept { return policy_; }

    [[nodiscard]] ibbe::UserSecretKey extract_user_key(std::string_view identity) const;

    [[nodiscard]] GroupMetadata create_group(std::string group_id, ibbe::Members members,
                                             std::size_t partition_size, Rng& rng) const;
    [[nodiscard]] GroupMetadata add_user(const GroupMetadata& meta, std::string_view user, Rng& rng) const;
    [[nodiscard]] GroupMetadata remove_user(const GroupMetadata& meta, std::string_view user, Rng& rng) const;
    /// Returns meta unchanged (same version) when the policy does not fire.
    [[nodiscard]] GroupMetadata maybe_repartition(const GroupMetadata& meta, Rng& rng) const;

  private:
    [[nodiscard]] SealedBlob seal_group_key(const GroupKey& gk, std::string_view group_id, Rng& rng) const;
    [[nodiscard]] GroupKey unseal_group_key(const GroupMetadata& meta) const;
    void populate(GroupMetadata& meta, ibbe::Members members, Rng& rng) const;

    ibbe::MasterSecretKey msk_;
    ibbe::PublicKey pk_;
    Sealer sealer_;
    RepartitionPolicy policy_;
};

/// Key used to wrap gk for a partition: sha256 of the canonical b_p encoding.
Key256 envelope_key(const ibbe::BroadcastKey& bk);

/// Client path: IBBE-decrypt the hosting partition's b_p, then open y_p.
/// Throws Error(not_a_member), or Error(stale_metadata) when the envelope
/// does not open under the derived key.
GroupKey client_decrypt(const ibbe::UserSecretKey& usk, const ibbe::PublicKey& pk, const GroupMetadata& meta);

// --- persistence through MetadataStore -------------------------------------------

/// Writes the records that differ from `previous` (all of them when null),
/// erases deleted partitions, then writes the group record.
void store_group(MetadataStore& store, const GroupMetadata* previous, const GroupMetadata& next);
GroupMetadata load_group(const MetadataStore& store, std::string_view group_id);

/// Reads the group record and only the caller's own partition record.
GroupKey client_decrypt_from_store(const ibbe::UserSecretKey& usk, const ibbe::PublicKey& pk,
                                   const MetadataStore& store, std::string_view group_id);

}  // namespace gac
