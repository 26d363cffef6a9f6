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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gac/errors.hpp"
#include "gac/group_manager.hpp"
#include "gac/op_counter.hpp"
#include "support.hpp"

using namespace gac;
using gac::test::identities;
using gac::test::system_keys;

namespace {

Sealer test_sealer(std::uint8_t fill = 0x42) {
    Key256 k{};
    k.fill(fill);
    return Sealer(k);
}

GroupAdmin make_admin(std::size_t capacity, RepartitionPolicy policy = {}) {
    const auto& keys = system_keys(capacity);
    return GroupAdmin(keys.msk, keys.pk, test_sealer(), policy);
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no Error thrown";
    return Errc::io_error;
}

/// Every member's view of gk; fails the test on disagreement.
GroupKey agreed_key(const GroupAdmin& admin, const GroupMetadata& meta) {
    std::optional<GroupKey> gk;
    for (const auto& [u, pid] : meta.index) {
        auto k = client_decrypt(admin.extract_user_key(u), admin.public_key(), meta);
        if (gk) EXPECT_EQ(k, *gk) << u;
        gk = k;
    }
    return gk.value();
}

std::vector<std::size_t> sizes(const GroupMetadata& meta) { return meta.occupancies(); }

/// Records every payload read.
class RecordingStore final : public MetadataStore {
  public:
    mutable std::vector<std::string> reads;

  private:
    void write_payload(const std::string& path, ByteView payload) override {
        data_[path] = Bytes(payload.begin(), payload.end());
    }
    Bytes read_payload(const std::string& path) const override {
        reads.push_back(path);
        return data_.at(path);
    }
    void remove_payload(const std::string& path) override { data_.erase(path); }

    std::map<std::string, Bytes> data_;
};

}  // namespace

// --- create -------------------------------------------------------------------------

TEST(CreateGroup, ChunksMembersInOrder) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(1);
    auto meta = admin.create_group("g", identities(5), 2, rng);
    EXPECT_EQ(sizes(meta), (std::vector<std::size_t>{2, 2, 1}));
    EXPECT_EQ(meta.version, 1u);
    EXPECT_TRUE(check_invariants(meta).empty());
}

TEST(CreateGroup, EveryMemberRecoversSameKey) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(2);
    auto meta = admin.create_group("g", identities(11), 4, rng);
    (void)agreed_key(admin, meta);
}

TEST(CreateGroup, CostIsPartitionsTimesEncrypt) {
    auto admin = make_admin(8);
    auto rng = Rng::seeded(3);
    OpScope one;
    (void)admin.create_group("g", identities(8), 8, rng);
    auto single = one.delta();
    OpScope many;
    (void)admin.create_group("g", identities(40), 8, rng);
    auto five = many.delta();
    EXPECT_EQ(five.ibbe_encrypt, 5u);
    EXPECT_EQ(five.group_ops(), 5 * single.group_ops());
    EXPECT_EQ(five.aead_seal, 5 * (single.aead_seal - 1) + 1);
}

TEST(CreateGroup, Rejections) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(4);
    std::vector<std::string> dup{"a", "b", "a"};
    std::vector<std::string> none;
    EXPECT_EQ(code_of([&] { (void)admin.create_group("g", dup, 2, rng); }), Errc::invalid_input);
    EXPECT_EQ(code_of([&] { (void)admin.create_group("g", none, 2, rng); }), Errc::invalid_input);
    EXPECT_EQ(code_of([&] { (void)admin.create_group("g", identities(3), 0, rng); }), Errc::invalid_capacity);
    EXPECT_EQ(code_of([&] { (void)admin.create_group("g", identities(3), 5, rng); }), Errc::invalid_capacity);
}

// --- add ----------------------------------------------------------------------------

TEST(AddUser, FillsExistingPartitionWithoutTouchingEnvelopes) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(5);
    auto meta = admin.create_group("g", identities(5), 4, rng);
    auto gk = agreed_key(admin, meta);
    auto next = admin.add_user(meta, "newbie", rng);

    EXPECT_EQ(next.partitions.size(), meta.partitions.size());
    EXPECT_EQ(next.version, meta.version + 1);
    EXPECT_EQ(next.sealed_gk, meta.sealed_gk);
    std::size_t changed_ct = 0, changed_y = 0;
    for (std::size_t i = 0; i < meta.partitions.size(); ++i) {
        changed_ct += !(next.partitions[i].ciphertext == meta.partitions[i].ciphertext);
        changed_y += next.partitions[i].wrapped_gk != meta.partitions[i].wrapped_gk;
    }
    EXPECT_EQ(changed_ct, 1u);
    EXPECT_EQ(changed_y, 0u);
    EXPECT_EQ(client_decrypt(admin.extract_user_key("newbie"), admin.public_key(), next), gk);
    EXPECT_EQ(agreed_key(admin, next), gk);
    EXPECT_TRUE(check_invariants(next).empty());
}

TEST(AddUser, AllFullOpensNewPartition) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(6);
    auto meta = admin.create_group("g", identities(4), 2, rng);
    auto gk = agreed_key(admin, meta);
    auto next = admin.add_user(meta, "extra", rng);
    EXPECT_EQ(next.partitions.size(), meta.partitions.size() + 1);
    EXPECT_EQ(next.partitions.back().members, (std::vector<std::string>{"extra"}));
    EXPECT_EQ(next.partitions.back().id, meta.next_partition_id);
    EXPECT_EQ(agreed_key(admin, next), gk);
}

TEST(AddUser, ChoosesAmongOpenPartitions) {
    auto admin = make_admin(4);
    std::set<std::uint64_t> hosts;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = Rng::seeded(seed);
        auto meta = admin.create_group("g", identities(12), 4, rng);
        meta = admin.remove_user(meta, "user0", rng);
        meta = admin.remove_user(meta, "user5", rng);
        auto next = admin.add_user(meta, "x", rng);
        hosts.insert(next.index.at("x"));
    }
    EXPECT_EQ(hosts.size(), 2u);
}

TEST(AddUser, Rejections) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(7);
    auto meta = admin.create_group("g", identities(2), 2, rng);
    EXPECT_EQ(code_of([&] { (void)admin.add_user(meta, "user1", rng); }), Errc::invalid_input);

    const auto& keys = system_keys(4);
    GroupAdmin other(keys.msk, keys.pk, test_sealer(0x17));
    EXPECT_EQ(code_of([&] { (void)other.add_user(meta, "new", rng); }), Errc::trust_boundary);
}

// --- remove -------------------------------------------------------------------------

TEST(RemoveUser, FreshKeyForRemainingMembersOnly) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(8);
    auto meta = admin.create_group("g", identities(10), 4, rng);
    auto old_gk = agreed_key(admin, meta);
    auto next = admin.remove_user(meta, "user6", rng);
    auto gk = agreed_key(admin, next);
    EXPECT_FALSE(gk == old_gk);
    EXPECT_EQ(next.version, meta.version + 1);
    EXPECT_EQ(code_of([&] { (void)client_decrypt(admin.extract_user_key("user6"), admin.public_key(), next); }),
              Errc::not_a_member);
    EXPECT_TRUE(check_invariants(next).empty());
}

TEST(RemoveUser, RevokedKeyOpensNoEnvelope) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(9);
    for (int trial = 0; trial < 100; ++trial) {
        auto members = test::random_identities(5 + rng.uniform(8), rng);
        auto meta = admin.create_group("g", members, 4, rng);
        auto victim = members[rng.uniform(members.size())];
        auto next = admin.remove_user(meta, victim, rng);
        auto gk = client_decrypt(admin.extract_user_key(next.index.begin()->first), admin.public_key(), next);
        auto usk = admin.extract_user_key(victim);
        // Best effort by the revoked user: claim a slot in each partition.
        for (const auto& p : next.partitions) {
            auto forged = next;
            for (auto& fp : forged.partitions)
                if (fp.id == p.id) fp.members.push_back(victim);
            forged.index[victim] = p.id;
            try {
                ASSERT_FALSE(client_decrypt(usk, admin.public_key(), forged) == gk) << trial;
            } catch (const Error& e) {
                ASSERT_EQ(e.code(), Errc::stale_metadata) << trial;
            }
        }
    }
}

TEST(RemoveUser, CostIsPartitionsTimesConstant) {
    RepartitionPolicy never{0, 1, 1, 1};
    auto admin = make_admin(8, never);
    auto rng = Rng::seeded(10);
    for (std::size_t parts : {2, 6}) {
        auto meta = admin.create_group("g", identities(8 * parts), 8, rng);
        OpScope scope;
        (void)admin.remove_user(meta, "user3", rng);
        auto d = scope.delta();
        EXPECT_EQ(d.ibbe_remove, 1u);
        EXPECT_EQ(d.ibbe_rekey, parts - 1);
        // One C3 division plus one (C1, C2, b_k) refresh per partition.
        EXPECT_EQ(d.g2_exp, parts + 1);
        EXPECT_EQ(d.g1_exp, parts);
        EXPECT_EQ(d.gt_exp, parts);
        EXPECT_EQ(d.aead_seal, parts + 1);
    }
}

TEST(RemoveUser, SoleMemberLeavesEmptyGroup) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(11);
    std::vector<std::string> one{"only"};
    auto meta = admin.create_group("g", one, 4, rng);
    auto next = admin.remove_user(meta, "only", rng);
    EXPECT_TRUE(next.partitions.empty());
    EXPECT_TRUE(next.index.empty());
    EXPECT_TRUE(check_invariants(next).empty());
    auto again = admin.add_user(next, "later", rng);
    EXPECT_EQ(again.partitions.size(), 1u);
    EXPECT_GT(again.partitions[0].id, meta.partitions[0].id);
    (void)agreed_key(admin, again);
}

TEST(RemoveUser, EmptiedPartitionIsDeleted) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(12);
    auto meta = admin.create_group("g", identities(9), 4, rng);  // [4, 4, 1]
    auto next = admin.remove_user(meta, "user8", rng);
    EXPECT_EQ(sizes(next), (std::vector<std::size_t>{4, 4}));
}

TEST(RemoveUser, NonMemberRejected) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(13);
    auto meta = admin.create_group("g", identities(3), 2, rng);
    EXPECT_EQ(code_of([&] { (void)admin.remove_user(meta, "ghost", rng); }), Errc::invalid_input);
}

// --- repartitioning -----------------------------------------------------------------

TEST(Repartition, Predicate) {
    std::vector<std::size_t> thirds{1, 1, 3};
    EXPECT_TRUE(repartition_needed(thirds, 3));
    std::vector<std::size_t> full{3, 3, 3};
    EXPECT_FALSE(repartition_needed(full, 3));
    std::vector<std::size_t> half{1, 3};
    EXPECT_FALSE(repartition_needed(half, 3)) << "exactly half sparse does not trigger";
    std::vector<std::size_t> two_thirds{2, 2, 2};
    EXPECT_FALSE(repartition_needed(two_thirds, 3)) << "2*3 < 2*3 is false";
    std::vector<std::size_t> none;
    EXPECT_FALSE(repartition_needed(none, 3));
}

TEST(Repartition, RequiresFewerPartitionsAfterRebuild) {
    std::vector<std::size_t> occ{5, 5, 5};  // 15 members, m = 8: rebuild gives 2
    EXPECT_TRUE(repartition_needed(occ, 8));
    std::vector<std::size_t> single{1};
    EXPECT_FALSE(repartition_needed(single, 8)) << "one sparse partition cannot shrink";
}

TEST(Repartition, ConfigurableThresholds) {
    std::vector<std::size_t> occ{3, 3, 2};
    EXPECT_FALSE(repartition_needed(occ, 4));
    RepartitionPolicy strict{4, 4, 1, 2};  // sparse = not full
    EXPECT_TRUE(repartition_needed(occ, 4, strict));
}

TEST(Repartition, RebuildsWithFreshKeyAndIds) {
    RepartitionPolicy never{0, 1, 1, 1};
    auto lazy = make_admin(3, never);
    auto rng = Rng::seeded(14);
    auto meta = lazy.create_group("g", identities(9), 3, rng);
    meta = lazy.remove_user(meta, "user0", rng);
    meta = lazy.remove_user(meta, "user1", rng);
    meta = lazy.remove_user(meta, "user3", rng);
    meta = lazy.remove_user(meta, "user4", rng);
    ASSERT_EQ(sizes(meta), (std::vector<std::size_t>{1, 1, 3}));
    auto old_gk = agreed_key(lazy, meta);

    auto admin = make_admin(3);
    auto next = admin.maybe_repartition(meta, rng);
    EXPECT_EQ(next.partitions.size(), 2u);
    EXPECT_EQ(next.version, meta.version + 1);
    for (const auto& p : next.partitions) EXPECT_GE(p.id, meta.next_partition_id);
    EXPECT_FALSE(agreed_key(admin, next) == old_gk);
    EXPECT_TRUE(check_invariants(next).empty());

    auto same = admin.maybe_repartition(next, rng);
    EXPECT_EQ(same.version, next.version);
}

TEST(Repartition, TriggeredByRemove) {
    auto admin = make_admin(3);
    auto rng = Rng::seeded(15);
    auto meta = admin.create_group("g", identities(9), 3, rng);
    meta = admin.remove_user(meta, "user0", rng);
    meta = admin.remove_user(meta, "user1", rng);
    meta = admin.remove_user(meta, "user3", rng);
    auto before = meta.version;
    meta = admin.remove_user(meta, "user4", rng);  // [1, 1, 3] -> rebuilt
    EXPECT_EQ(meta.partitions.size(), 2u);
    EXPECT_EQ(meta.version, before + 1);
    (void)agreed_key(admin, meta);
}

// --- client side --------------------------------------------------------------------

TEST(ClientDecrypt, CostDependsOnPartitionSizeNotGroupSize) {
    auto admin = make_admin(16);
    auto rng = Rng::seeded(16);
    auto small = admin.create_group("g", identities(32), 16, rng);
    auto large = admin.create_group("g", identities(400), 16, rng);
    auto usk = admin.extract_user_key("user0");
    OpScope a;
    (void)client_decrypt(usk, admin.public_key(), small);
    auto da = a.delta();
    OpScope b;
    (void)client_decrypt(usk, admin.public_key(), large);
    EXPECT_EQ(da, b.delta());
}

TEST(ClientDecrypt, ReadsOnlyOwnPartition) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(17);
    auto meta = admin.create_group("g", identities(12), 4, rng);
    RecordingStore store;
    store_group(store, nullptr, meta);
    store.reads.clear();
    auto gk = client_decrypt_from_store(admin.extract_user_key("user5"), admin.public_key(), store, "g");
    EXPECT_EQ(gk, agreed_key(admin, meta));
    std::vector<std::string> expected{"g/group.meta", MetadataStore::partition_record_path("g", meta.index.at("user5"))};
    EXPECT_EQ(store.reads, expected);
}

TEST(ClientDecrypt, StaleEnvelopeDetected) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(18);
    auto meta = admin.create_group("g", identities(6), 4, rng);
    auto next = admin.remove_user(meta, "user0", rng);
    auto mixed = next;
    mixed.partitions[1].wrapped_gk = meta.partitions[1].wrapped_gk;
    auto u = mixed.partitions[1].members[0];
    EXPECT_EQ(code_of([&] { (void)client_decrypt(admin.extract_user_key(u), admin.public_key(), mixed); }),
              Errc::stale_metadata);
}

TEST(ClientDecrypt, EnvelopeBoundToGroupAndPartition) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(19);
    auto meta = admin.create_group("g", identities(2), 4, rng);
    auto renamed = meta;
    renamed.group_id = "h";
    EXPECT_EQ(code_of([&] { (void)client_decrypt(admin.extract_user_key("user0"), admin.public_key(), renamed); }),
              Errc::stale_metadata);
}

// --- persistence, sealing, invariants -------------------------------------------------

TEST(Persistence, RecordsRoundTrip) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(20);
    auto meta = admin.create_group("g", identities(7), 3, rng);
    auto p = Partition::deserialize(meta.partitions[1].serialize());
    EXPECT_EQ(p.id, meta.partitions[1].id);
    EXPECT_EQ(p.members, meta.partitions[1].members);
    EXPECT_EQ(p.ciphertext, meta.partitions[1].ciphertext);
    EXPECT_EQ(p.wrapped_gk, meta.partitions[1].wrapped_gk);

    MemoryStore store;
    store_group(store, nullptr, meta);
    auto loaded = load_group(store, "g");
    EXPECT_EQ(loaded.serialize_group_record(), meta.serialize_group_record());
    EXPECT_EQ(agreed_key(admin, loaded), agreed_key(admin, meta));
}

TEST(Persistence, PartialUpdatesWriteOnlyChangedRecords) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(21);
    auto meta = admin.create_group("g", identities(9), 4, rng);
    MemoryStore store;
    store_group(store, nullptr, meta);
    auto v = store.group_version("g");
    auto next = admin.add_user(meta, "new", rng);
    store_group(store, &meta, next);
    auto changes = store.watch("g", v, std::chrono::milliseconds(0));
    ASSERT_EQ(changes.paths.size(), 2u);
    EXPECT_EQ(changes.paths[0], MetadataStore::partition_record_path("g", next.index.at("new")));
    EXPECT_EQ(changes.paths[1], "g/group.meta");

    auto after = admin.remove_user(next, "user8", rng);
    v = store.group_version("g");
    store_group(store, &next, after);
    EXPECT_EQ(store.list_group("g").size(), after.partitions.size());
    EXPECT_EQ(load_group(store, "g").version, after.version);
}

TEST(Persistence, SealedMasterKey) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(22);
    auto blob = admin.seal_master_key(rng);
    auto restored = GroupAdmin::from_sealed(blob, admin.public_key(), test_sealer());
    EXPECT_EQ(restored.extract_user_key("a"), admin.extract_user_key("a"));
    EXPECT_EQ(code_of([&] { (void)GroupAdmin::from_sealed(blob, admin.public_key(), test_sealer(1)); }),
              Errc::trust_boundary);
    EXPECT_EQ(code_of([&] { (void)GroupAdmin::from_sealed(blob, system_keys(8).pk, test_sealer()); }),
              Errc::trust_boundary);
}

TEST(Invariants, DetectCorruption) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(23);
    auto meta = admin.create_group("g", identities(6), 4, rng);
    ASSERT_TRUE(check_invariants(meta).empty());

    auto a = meta;
    a.index.erase("user0");
    EXPECT_FALSE(check_invariants(a).empty());
    auto b = meta;
    b.partitions[1].members.push_back("user0");
    EXPECT_FALSE(check_invariants(b).empty());
    auto c = meta;
    c.partitions[0].members.push_back("x");
    c.index["x"] = c.partitions[0].id;
    EXPECT_FALSE(check_invariants(c).empty()) << "over capacity";
    auto d = meta;
    d.partitions[1].id = d.partitions[0].id;
    EXPECT_FALSE(check_invariants(d).empty());
}

TEST(Envelope, KeyIsSha256OfBroadcastKey) {
    const auto& keys = system_keys(4);
    auto rng = Rng::seeded(24);
    std::vector<std::string> s{"a"};
    auto enc = ibbe::encrypt_msk(keys.msk, keys.pk, s, rng);
    auto k = envelope_key(enc.key);
    EXPECT_EQ(k.size(), 32u);
    EXPECT_EQ(k, sha256(enc.key.bk.encode()));
}

TEST(Envelope, NoncesUniqueAcrossOperations) {
    auto admin = make_admin(4);
    auto rng = Rng::seeded(25);
    auto meta = admin.create_group("g", identities(12), 4, rng);
    std::set<Bytes> nonces;
    std::size_t wraps = 0;
    auto collect = [&](const GroupMetadata& m) {
        for (const auto& p : m.partitions) {
            auto n = aead::nonce_of(p.wrapped_gk);
            nonces.emplace(n.begin(), n.end());
            ++wraps;
        }
    };
    collect(meta);
    for (int i = 0; i < 8; ++i) {
        meta = admin.remove_user(meta, meta.index.begin()->first, rng);
        collect(meta);
    }
    EXPECT_EQ(nonces.size(), wraps);
}
