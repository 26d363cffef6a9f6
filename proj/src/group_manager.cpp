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

#include "gac/group_manager.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gac/errors.hpp"

namespace gac {

namespace {

constexpr std::uint8_t kFormatVersion = 1;
constexpr std::string_view kGroupMagic = "GACG";
constexpr std::string_view kPartitionMagic = "GACP";

Bytes envelope_aad(std::string_view group_id, std::uint64_t partition_id) {
    ByteWriter w;
    w.str("gac/y/v1");
    w.str(group_id);
    w.u64(partition_id);
    return std::move(w).take();
}

std::string gk_label(std::string_view group_id) { return "group-key:" + std::string(group_id); }

constexpr std::string_view kMasterKeyLabel = "master-secret-key";

void expect_magic(ByteReader& r, std::string_view magic) {
    auto m = r.raw(magic.size());
    if (!std::equal(m.begin(), m.end(), magic.begin())) throw Error(Errc::malformed_encoding, "bad record magic");
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported record version");
}

struct GroupRecord {
    std::string group_id;
    std::size_t partition_size = 0;
    std::uint64_t version = 0;
    std::uint64_t next_partition_id = 0;
    SealedBlob sealed_gk;
    std::vector<std::uint64_t> partition_ids;
    std::map<std::string, std::uint64_t, std::less<>> index;
};

GroupRecord parse_group_record(ByteView in) {
    ByteReader r(in);
    expect_magic(r, kGroupMagic);
    GroupRecord g;
    g.group_id = r.str();
    g.partition_size = r.u32();
    g.version = r.u64();
    g.next_partition_id = r.u64();
    g.sealed_gk.data = r.blob();
    auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) g.partition_ids.push_back(r.u64());
    auto members = r.u32();
    for (std::uint32_t i = 0; i < members; ++i) {
        auto id = r.str();
        auto pid = r.u64();
        if (!g.index.emplace(std::move(id), pid).second)
            throw Error(Errc::malformed_encoding, "duplicate member in group index");
    }
    r.expect_end();
    return g;
}

Bytes wrap_group_key(const ibbe::BroadcastKey& bk, const GroupKey& gk, std::string_view group_id,
                     std::uint64_t partition_id, Rng& rng) {
    return aead::seal(envelope_key(bk), gk.bytes, envelope_aad(group_id, partition_id), rng);
}

void check_distinct(ibbe::Members members) {
    std::unordered_set<std::string_view> seen;
    for (const auto& m : members) {
        if (m.empty()) throw Error(Errc::invalid_input, "empty identity");
        if (!seen.insert(m).second) throw Error(Errc::invalid_input, "duplicate identity '" + m + "'");
    }
}

}  // namespace

// --- records ---------------------------------------------------------------------

Bytes Partition::serialize() const {
    ByteWriter w;
    w.raw(as_bytes(kPartitionMagic));
    w.u8(kFormatVersion);
    w.u64(id);
    w.u32(static_cast<std::uint32_t>(members.size()));
    for (const auto& m : members) w.str(m);
    w.raw(ciphertext.serialize());
    w.blob(wrapped_gk);
    return std::move(w).take();
}

Partition Partition::deserialize(ByteView in) {
    ByteReader r(in);
    expect_magic(r, kPartitionMagic);
    Partition p;
    p.id = r.u64();
    auto n = r.u32();
    p.members.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) p.members.push_back(r.str());
    p.ciphertext = ibbe::BroadcastCiphertext::deserialize(r.raw(ibbe::BroadcastCiphertext::kEncodedSize));
    p.wrapped_gk = r.blob();
    r.expect_end();
    return p;
}

const Partition* GroupMetadata::find_partition(std::string_view member) const {
    auto it = index.find(member);
    if (it == index.end()) return nullptr;
    for (const auto& p : partitions)
        if (p.id == it->second) return &p;
    return nullptr;
}

std::vector<std::size_t> GroupMetadata::occupancies() const {
    std::vector<std::size_t> out;
    out.reserve(partitions.size());
    for (const auto& p : partitions) out.push_back(p.members.size());
    return out;
}

std::size_t GroupMetadata::envelope_bytes() const {
    std::size_t total = sealed_gk.data.size();
    for (const auto& p : partitions) total += ibbe::BroadcastCiphertext::kEncodedSize + p.wrapped_gk.size();
    return total;
}

Bytes GroupMetadata::serialize_group_record() const {
    ByteWriter w;
    w.raw(as_bytes(kGroupMagic));
    w.u8(kFormatVersion);
    w.str(group_id);
    w.u32(static_cast<std::uint32_t>(partition_size));
    w.u64(version);
    w.u64(next_partition_id);
    w.blob(sealed_gk.data);
    w.u32(static_cast<std::uint32_t>(partitions.size()));
    for (const auto& p : partitions) w.u64(p.id);
    w.u32(static_cast<std::uint32_t>(index.size()));
    for (const auto& [member, pid] : index) {
        w.str(member);
        w.u64(pid);
    }
    return std::move(w).take();
}

GroupMetadata GroupMetadata::assemble(ByteView group_record, std::span<const Partition> partitions) {
    auto rec = parse_group_record(group_record);
    GroupMetadata meta;
    meta.group_id = std::move(rec.group_id);
    meta.partition_size = rec.partition_size;
    meta.version = rec.version;
    meta.next_partition_id = rec.next_partition_id;
    meta.sealed_gk = std::move(rec.sealed_gk);
    meta.index = std::move(rec.index);
    for (auto pid : rec.partition_ids) {
        auto it = std::find_if(partitions.begin(), partitions.end(), [&](const Partition& p) { return p.id == pid; });
        if (it == partitions.end())
            throw Error(Errc::stale_metadata, "partition " + std::to_string(pid) + " missing from snapshot");
        meta.partitions.push_back(*it);
    }
    return meta;
}

std::vector<std::string> check_invariants(const GroupMetadata& meta) {
    std::vector<std::string> problems;
    std::set<std::uint64_t> ids;
    std::size_t slots = 0;
    for (const auto& p : meta.partitions) {
        if (!ids.insert(p.id).second) problems.push_back("duplicate partition id " + std::to_string(p.id));
        if (p.id >= meta.next_partition_id)
            problems.push_back("partition id " + std::to_string(p.id) + " not below next_partition_id");
        if (p.members.empty() || p.members.size() > meta.partition_size)
            problems.push_back("partition " + std::to_string(p.id) + " occupancy " +
                               std::to_string(p.members.size()) + " outside [1, " +
                               std::to_string(meta.partition_size) + "]");
        for (const auto& m : p.members) {
            ++slots;
            auto it = meta.index.find(m);
            if (it == meta.index.end())
                problems.push_back("member '" + m + "' missing from index");
            else if (it->second != p.id)
                problems.push_back("member '" + m + "' indexed to partition " + std::to_string(it->second) +
                                   " but stored in " + std::to_string(p.id));
        }
    }
    // Equal sizes plus every slot mapping back to its own partition makes the
    // index a bijection (duplicates would leave some index entry unmatched).
    if (slots != meta.index.size())
        problems.push_back("index has " + std::to_string(meta.index.size()) + " entries for " +
                           std::to_string(slots) + " partition slots");
    return problems;
}

bool repartition_needed(std::span<const std::size_t> occupancies, std::size_t partition_size,
                        const RepartitionPolicy& policy) {
    if (occupancies.empty() || partition_size == 0) return false;
    std::size_t sparse = 0;
    std::size_t total = 0;
    for (auto occ : occupancies) {
        total += occ;
        if (occ * policy.occupancy_den < policy.occupancy_num * partition_size) ++sparse;
    }
    const bool low_occupancy = sparse * policy.partitions_den > policy.partitions_num * occupancies.size();
    const std::size_t rebuilt = (total + partition_size - 1) / partition_size;
    return low_occupancy && rebuilt < occupancies.size();
}

Key256 envelope_key(const ibbe::BroadcastKey& bk) { return sha256(bk.bk.encode()); }

// --- GroupAdmin ---------------------------------------------------------------------

GroupAdmin::GroupAdmin(ibbe::MasterSecretKey msk, ibbe::PublicKey pk, Sealer sealer, RepartitionPolicy policy)
    : msk_(std::move(msk)), pk_(std::move(pk)), sealer_(sealer), policy_(policy) {}

GroupAdmin GroupAdmin::from_sealed(ByteView sealed_msk, ibbe::PublicKey pk, Sealer sealer,
                                   RepartitionPolicy policy) {
    Bytes raw;
    try {
        raw = sealer.unseal(sealed_msk, kMasterKeyLabel);
    } catch (const Error& e) {
        throw Error(Errc::trust_boundary, std::string("cannot unseal master key: ") + e.what());
    }
    auto msk = ibbe::detail::decode_master_key(raw);
    if (!(msk.g.pow(msk.gamma) == pk.w)) throw Error(Errc::trust_boundary, "master key does not match public key");
    return GroupAdmin(std::move(msk), std::move(pk), sealer, policy);
}

Bytes GroupAdmin::seal_master_key(Rng& rng) const {
    return sealer_.seal(ibbe::detail::encode_master_key(msk_), kMasterKeyLabel, rng);
}

ibbe::UserSecretKey GroupAdmin::extract_user_key(std::string_view identity) const {
    return ibbe::extract_user_key(msk_, identity);
}

SealedBlob GroupAdmin::seal_group_key(const GroupKey& gk, std::string_view group_id, Rng& rng) const {
    return {sealer_.seal(gk.bytes, gk_label(group_id), rng)};
}

GroupKey GroupAdmin::unseal_group_key(const GroupMetadata& meta) const {
    Bytes raw;
    try {
        raw = sealer_.unseal(meta.sealed_gk.data, gk_label(meta.group_id));
    } catch (const Error& e) {
        throw Error(Errc::trust_boundary, std::string("cannot unseal group key: ") + e.what());
    }
    if (raw.size() != 32) throw Error(Errc::trust_boundary, "sealed group key has wrong size");
    GroupKey gk;
    std::copy(raw.begin(), raw.end(), gk.bytes.begin());
    return gk;
}

// Fresh gk and fresh partitions for `members`, chunked in order.
void GroupAdmin::populate(GroupMetadata& meta, ibbe::Members members, Rng& rng) const {
    meta.partitions.clear();
    meta.index.clear();
    auto gk = GroupKey::random(rng);
    const auto m = meta.partition_size;
    for (std::size_t start = 0; start < members.size(); start += m) {
        auto chunk = members.subspan(start, std::min(m, members.size() - start));
        Partition p;
        p.id = meta.next_partition_id++;
        p.members.assign(chunk.begin(), chunk.end());
        auto enc = ibbe::encrypt_msk(msk_, pk_, chunk, rng);
        p.ciphertext = enc.ct;
        p.wrapped_gk = wrap_group_key(enc.key, gk, meta.group_id, p.id, rng);
        for (const auto& u : p.members) meta.index.emplace(u, p.id);
        meta.partitions.push_back(std::move(p));
    }
    meta.sealed_gk = seal_group_key(gk, meta.group_id, rng);
}

GroupMetadata GroupAdmin::create_group(std::string group_id, ibbe::Members members, std::size_t partition_size,
                                       Rng& rng) const {
    if (group_id.empty()) throw Error(Errc::invalid_input, "empty group id");
    if (members.empty()) throw Error(Errc::invalid_input, "a group needs at least one member");
    if (partition_size == 0) throw Error(Errc::invalid_capacity, "partition size must be at least 1");
    if (partition_size > pk_.capacity())
        throw Error(Errc::invalid_capacity, "partition size " + std::to_string(partition_size) +
                                                " exceeds public key capacity " + std::to_string(pk_.capacity()));
    check_distinct(members);
    GroupMetadata meta;
    meta.group_id = std::move(group_id);
    meta.partition_size = partition_size;
    meta.version = 1;
    populate(meta, members, rng);
    return meta;
}

GroupMetadata GroupAdmin::add_user(const GroupMetadata& meta, std::string_view user, Rng& rng) const {
    if (user.empty()) throw Error(Errc::invalid_input, "empty identity");
    if (meta.index.contains(user)) throw Error(Errc::invalid_input, "'" + std::string(user) + "' is already a member");

    GroupMetadata next = meta;
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < next.partitions.size(); ++i)
        if (next.partitions[i].members.size() < next.partition_size) open.push_back(i);

    if (open.empty()) {
        Partition p;
        p.id = next.next_partition_id++;
        p.members.emplace_back(user);
        auto enc = ibbe::encrypt_msk(msk_, pk_, p.members, rng);
        auto gk = unseal_group_key(meta);
        p.ciphertext = enc.ct;
        p.wrapped_gk = wrap_group_key(enc.key, gk, next.group_id, p.id, rng);
        next.index.emplace(user, p.id);
        next.partitions.push_back(std::move(p));
    } else {
        // b_p is unchanged, so y_p stays as is.
        auto& p = next.partitions[open[rng.uniform(open.size())]];
        p.ciphertext = ibbe::add_user_msk(msk_, pk_, p.ciphertext, p.members, user);
        p.members.emplace_back(user);
        next.index.emplace(user, p.id);
    }
    ++next.version;
    return next;
}

GroupMetadata GroupAdmin::remove_user(const GroupMetadata& meta, std::string_view user, Rng& rng) const {
    auto it = meta.index.find(user);
    if (it == meta.index.end()) throw Error(Errc::invalid_input, "'" + std::string(user) + "' is not a member");
    const auto host_id = it->second;

    GroupMetadata next = meta;
    auto gk = GroupKey::random(rng);
    next.index.erase(std::string(user));

    std::vector<Partition> kept;
    kept.reserve(next.partitions.size());
    for (auto& p : next.partitions) {
        ibbe::Encryption enc;
        if (p.id == host_id) {
            enc = ibbe::remove_user_msk(msk_, pk_, p.ciphertext, p.members, user, rng);
            std::erase(p.members, std::string(user));
            if (p.members.empty()) continue;
        } else {
            enc = ibbe::rekey(p.ciphertext, pk_, rng);
        }
        p.ciphertext = enc.ct;
        p.wrapped_gk = wrap_group_key(enc.key, gk, next.group_id, p.id, rng);
        kept.push_back(std::move(p));
    }
    next.partitions = std::move(kept);
    next.sealed_gk = seal_group_key(gk, next.group_id, rng);

    if (repartition_needed(next.occupancies(), next.partition_size, policy_)) {
        std::vector<std::string> members;
        members.reserve(next.index.size());
        for (const auto& p : next.partitions) members.insert(members.end(), p.members.begin(), p.members.end());
        populate(next, members, rng);
    }
    ++next.version;
    return next;
}

GroupMetadata GroupAdmin::maybe_repartition(const GroupMetadata& meta, Rng& rng) const {
    if (!repartition_needed(meta.occupancies(), meta.partition_size, policy_)) return meta;
    GroupMetadata next = meta;
    std::vector<std::string> members;
    members.reserve(meta.index.size());
    for (const auto& p : meta.partitions) members.insert(members.end(), p.members.begin(), p.members.end());
    populate(next, members, rng);
    ++next.version;
    return next;
}

// --- client ---------------------------------------------------------------------------

namespace {

GroupKey open_partition(const ibbe::UserSecretKey& usk, const ibbe::PublicKey& pk, std::string_view group_id,
                        const Partition& p) {
    if (std::find(p.members.begin(), p.members.end(), usk.identity) == p.members.end())
        throw Error(Errc::stale_metadata, "partition " + std::to_string(p.id) + " does not list '" + usk.identity + "'");
    auto bk = ibbe::decrypt(usk, p.members, p.ciphertext, pk);
    Bytes raw;
    try {
        raw = aead::open(envelope_key(bk), p.wrapped_gk, envelope_aad(group_id, p.id));
    } catch (const Error&) {
        throw Error(Errc::stale_metadata, "envelope of partition " + std::to_string(p.id) + " does not open");
    }
    if (raw.size() != 32) throw Error(Errc::stale_metadata, "envelope holds a key of the wrong size");
    GroupKey gk;
    std::copy(raw.begin(), raw.end(), gk.bytes.begin());
    return gk;
}

}  // namespace

GroupKey client_decrypt(const ibbe::UserSecretKey& usk, const ibbe::PublicKey& pk, const GroupMetadata& meta) {
    if (!meta.index.contains(usk.identity))
        throw Error(Errc::not_a_member, "'" + usk.identity + "' is not a member of " + meta.group_id);
    const auto* p = meta.find_partition(usk.identity);
    if (!p) throw Error(Errc::stale_metadata, "hosting partition of '" + usk.identity + "' is missing");
    return open_partition(usk, pk, meta.group_id, *p);
}

void store_group(MetadataStore& store, const GroupMetadata* previous, const GroupMetadata& next) {
    std::map<std::uint64_t, const Partition*> before;
    if (previous)
        for (const auto& p : previous->partitions) before.emplace(p.id, &p);
    for (const auto& p : next.partitions) {
        auto it = before.find(p.id);
        if (it == before.end() || !(it->second->ciphertext == p.ciphertext) ||
            it->second->wrapped_gk != p.wrapped_gk || it->second->members != p.members)
            store.put(MetadataStore::partition_record_path(next.group_id, p.id), p.serialize());
        if (it != before.end()) before.erase(it);
    }
    for (const auto& [id, p] : before) store.erase(MetadataStore::partition_record_path(next.group_id, id));
    store.put(MetadataStore::group_record_path(next.group_id), next.serialize_group_record());
}

GroupMetadata load_group(const MetadataStore& store, std::string_view group_id) {
    auto record = store.get(MetadataStore::group_record_path(group_id));
    auto rec = parse_group_record(record.payload);
    std::vector<Partition> parts;
    parts.reserve(rec.partition_ids.size());
    for (auto pid : rec.partition_ids)
        parts.push_back(Partition::deserialize(store.get(MetadataStore::partition_record_path(group_id, pid)).payload));
    return GroupMetadata::assemble(record.payload, parts);
}

GroupKey client_decrypt_from_store(const ibbe::UserSecretKey& usk, const ibbe::PublicKey& pk,
                                   const MetadataStore& store, std::string_view group_id) {
    auto rec = parse_group_record(store.get(MetadataStore::group_record_path(group_id)).payload);
    auto it = rec.index.find(usk.identity);
    if (it == rec.index.end())
        throw Error(Errc::not_a_member, "'" + usk.identity + "' is not a member of " + std::string(group_id));
    Partition p;
    try {
        p = Partition::deserialize(store.get(MetadataStore::partition_record_path(group_id, it->second)).payload);
    } catch (const Error& e) {
        if (e.code() != Errc::not_found) throw;
        throw Error(Errc::stale_metadata, "partition record vanished; refetch the group");
    }
    return open_partition(usk, pk, group_id, p);
}

}  // namespace gac
