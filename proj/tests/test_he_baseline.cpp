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

#include <fstream>

#include "gac/errors.hpp"
#include "gac/he_baseline.hpp"
#include "gac/op_counter.hpp"
#include "support.hpp"

using namespace gac;
using namespace gac::he;
using gac::test::identities;

namespace {

Sealer test_sealer() {
    Key256 k{};
    k.fill(0x24);
    return Sealer(k);
}

KeyDirectory directory_for(const std::vector<std::string>& ids, std::uint64_t seed = 1) {
    auto rng = Rng::seeded(seed);
    KeyDirectory dir;
    dir.ensure(ids, rng);
    return dir;
}

}  // namespace

TEST(Wrap, RoundTripAndSize) {
    auto rng = Rng::seeded(1);
    auto kp = generate_keypair("alice", rng);
    auto gk = GroupKey::random(rng);
    Bytes aad{1, 2};
    auto blob = wrap(kp.public_key, gk, aad, rng);
    EXPECT_EQ(blob.size(), kWrappedSize);
    EXPECT_EQ(kWrappedSize, 92u);
    EXPECT_EQ(unwrap(kp, blob, aad), gk);

    auto other = generate_keypair("bob", rng);
    EXPECT_THROW((void)unwrap(other, blob, aad), Error);
    EXPECT_THROW((void)unwrap(kp, blob, Bytes{3}), Error);
}

TEST(Wrap, KeypairsAreDeterministicPerSeed) {
    auto a = Rng::seeded(9), b = Rng::seeded(9);
    auto k1 = generate_keypair("x", a);
    auto k2 = generate_keypair("x", b);
    EXPECT_EQ(k1.public_key, k2.public_key);
    EXPECT_EQ(k1.private_key, k2.private_key);
}

TEST(HEGroup, SingletonOwnerUnwraps) {
    std::vector<std::string> one{"owner"};
    auto dir = directory_for(one);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(2);
    auto meta = admin.create_group("g", one, rng);
    ASSERT_EQ(meta.entries.size(), 1u);
    (void)client_decrypt(dir.at("owner"), meta);
}

TEST(HEGroup, EntryCountEqualsGroupSize) {
    auto ids = identities(1000);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(3);
    for (std::size_t n : {10, 100, 1000}) {
        auto meta = admin.create_group("g", std::span(ids).first(n), rng);
        EXPECT_EQ(meta.entries.size(), n);
        EXPECT_EQ(meta.envelope_bytes(), envelope_bytes_for(n));
    }
}

TEST(HEGroup, AllMembersAgree) {
    auto ids = identities(20);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(4);
    auto meta = admin.create_group("g", ids, rng);
    auto gk = client_decrypt(dir.at(ids[0]), meta);
    for (const auto& u : ids) EXPECT_EQ(client_decrypt(dir.at(u), meta), gk);
}

TEST(HEGroup, MissingPublicKey) {
    auto ids = identities(3);
    auto dir = directory_for(std::vector<std::string>(ids.begin(), ids.begin() + 2));
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(5);
    try {
        (void)admin.create_group("g", ids, rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::key_lookup);
    }
}

TEST(HEGroup, AddIsOneWrapAndKeepsKey) {
    auto ids = identities(50);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(6);
    auto meta = admin.create_group("g", std::span(ids).first(49), rng);
    auto gk = client_decrypt(dir.at(ids[0]), meta);
    OpScope scope;
    auto next = admin.add_user(meta, ids[49], rng);
    EXPECT_EQ(scope.delta().he_wrap, 1u);
    EXPECT_EQ(next.version, meta.version + 1);
    EXPECT_EQ(client_decrypt(dir.at(ids[49]), next), gk);
    EXPECT_THROW((void)admin.add_user(next, ids[49], rng), Error);
}

TEST(HEGroup, RemoveRewrapsForRemainingMembers) {
    auto ids = identities(30);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(7);
    auto meta = admin.create_group("g", ids, rng);
    auto old_gk = client_decrypt(dir.at(ids[0]), meta);

    OpScope scope;
    auto next = admin.remove_user(meta, ids[7], rng);
    EXPECT_EQ(scope.delta().he_wrap, ids.size() - 1);
    EXPECT_EQ(next.entries.size(), ids.size() - 1);

    auto gk = client_decrypt(dir.at(ids[0]), next);
    EXPECT_FALSE(gk == old_gk);
    for (const auto& u : ids)
        if (u != ids[7]) EXPECT_EQ(client_decrypt(dir.at(u), next), gk);

    EXPECT_THROW((void)client_decrypt(dir.at(ids[7]), next), Error);
    for (const auto& e : next.entries) EXPECT_THROW((void)unwrap(dir.at(ids[7]), e.wrapped_gk, {}), Error);
}

TEST(HEGroup, RevocationSoundness) {
    auto ids = identities(12);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto meta = admin.create_group("g", ids, rng);
        auto victim = ids[rng.uniform(ids.size())];
        auto next = admin.remove_user(meta, victim, rng);
        for (const auto& e : next.entries) {
            auto forged = next;
            forged.entries.push_back({victim, e.wrapped_gk});
            try {
                (void)client_decrypt(dir.at(victim), forged);
                FAIL() << trial;
            } catch (const Error& err) {
                ASSERT_EQ(err.code(), Errc::stale_metadata);
            }
        }
    }
}

TEST(HEGroup, CostScaling) {
    auto ids = identities(400);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(9);
    std::vector<std::uint64_t> add, rem;
    for (std::size_t n : {100, 400}) {
        auto meta = admin.create_group("g", std::span(ids).first(n - 1), rng);
        OpScope a;
        meta = admin.add_user(meta, ids[n - 1], rng);
        add.push_back(a.delta().he_wrap);
        OpScope r;
        (void)admin.remove_user(meta, ids[0], rng);
        rem.push_back(r.delta().he_wrap);
    }
    EXPECT_EQ(add[0], add[1]);
    EXPECT_EQ(rem[1], 4 * rem[0] + 3);
}

TEST(HEGroup, MetadataSizeIsLinear) {
    auto ids = identities(800);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(10);
    std::vector<double> xs, ys;
    for (std::size_t n : {50, 100, 200, 400, 800}) {
        auto meta = admin.create_group("g", std::span(ids).first(n), rng);
        xs.push_back(static_cast<double>(n));
        ys.push_back(static_cast<double>(meta.serialize().size()));
    }
    EXPECT_NEAR(test::loglog_slope(xs, ys), 1.0, 0.05);
}

TEST(HEGroup, SerializationRoundTripAndStore) {
    auto ids = identities(5);
    auto dir = directory_for(ids);
    HEAdmin admin(dir, test_sealer());
    auto rng = Rng::seeded(11);
    auto meta = admin.create_group("g", ids, rng);
    auto back = HEGroupMetadata::deserialize(meta.serialize());
    EXPECT_EQ(back.serialize(), meta.serialize());

    MemoryStore store;
    he::store_group(store, meta);
    auto loaded = he::load_group(store, "g");
    EXPECT_EQ(client_decrypt(dir.at(ids[3]), loaded), client_decrypt(dir.at(ids[3]), meta));
}

TEST(KeyDirectory, SaveLoadAndErrors) {
    auto ids = identities(4);
    auto dir = directory_for(ids);
    auto path = std::filesystem::temp_directory_path() / "gac_test_keydir.tsv";
    dir.save(path);
    auto loaded = KeyDirectory::load(path);
    EXPECT_EQ(loaded.size(), 4u);
    EXPECT_EQ(loaded.at("user2").public_key, dir.at("user2").public_key);
    try {
        (void)loaded.at("nobody");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::key_lookup);
    }

    {
        std::ofstream out(path, std::ios::app);
        out << "broken line\n";
    }
    try {
        (void)KeyDirectory::load(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::parse_error);
        EXPECT_NE(std::string(e.what()).find(":6:"), std::string::npos) << e.what();
    }
    std::filesystem::remove(path);
}
