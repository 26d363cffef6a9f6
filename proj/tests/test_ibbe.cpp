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

#include "gac/errors.hpp"
#include "gac/ibbe.hpp"
#include "gac/ibbe_testing.hpp"
#include "gac/op_counter.hpp"
#include "support.hpp"

using namespace gac;
using namespace gac::ibbe;
using gac::test::identities;
using gac::test::system_keys;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no Error thrown";
    return Errc::io_error;
}

}  // namespace

// --- setup / extract -------------------------------------------------------------

TEST(Setup, CapacityOneHasTwoPowers) {
    auto rng = Rng::seeded(1);
    auto keys = setup(1, rng);
    EXPECT_EQ(keys.pk.h_powers.size(), 2u);
    EXPECT_EQ(keys.pk.capacity(), 1u);
}

TEST(Setup, ZeroCapacityRejected) {
    auto rng = Rng::seeded(1);
    EXPECT_EQ(code_of([&] { (void)setup(0, rng); }), Errc::invalid_capacity);
}

TEST(Setup, CostIsLinearInCapacity) {
    for (std::size_t m : {1, 5, 40}) {
        auto rng = Rng::seeded(m);
        OpScope scope;
        (void)setup(m, rng);
        EXPECT_EQ(scope.delta().g2_exp, m);
    }
}

TEST(Setup, PowersChainUnderGamma) {
    auto rng = Rng::seeded(2);
    auto keys = setup(4, rng);
    EXPECT_EQ(keys.pk.h_powers[2], keys.pk.h_powers[1].pow(keys.msk.gamma));
    EXPECT_EQ(keys.pk.w, keys.msk.g.pow(keys.msk.gamma));
    EXPECT_EQ(keys.pk.v, pairing(keys.msk.g, keys.pk.h()));
    EXPECT_EQ(pairing(keys.msk.g, keys.pk.h_powers[1]), pairing(keys.pk.w, keys.pk.h_powers[0]));
}

TEST(Extract, DeterministicAndDistinct) {
    const auto& keys = system_keys(8);
    auto a1 = extract_user_key(keys.msk, "alice");
    auto a2 = extract_user_key(keys.msk, "alice");
    auto b = extract_user_key(keys.msk, "bob");
    EXPECT_EQ(a1, a2);
    EXPECT_FALSE(a1.sk == b.sk);
}

TEST(Extract, ValidityCheckForRandomIdentities) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(3);
    for (const auto& id : test::random_identities(100, rng)) {
        auto usk = extract_user_key(keys.msk, id);
        ASSERT_TRUE(user_key_valid(keys.pk, usk)) << id;
    }
    auto forged = extract_user_key(keys.msk, "alice");
    forged.identity = "mallory";
    EXPECT_FALSE(user_key_valid(keys.pk, forged));
}

TEST(Extract, DegenerateIdentityDetected) {
    auto keys = system_keys(8);
    keys.msk.gamma = -hash_to_scalar("unlucky");
    EXPECT_EQ(code_of([&] { (void)extract_user_key(keys.msk, "unlucky"); }), Errc::degenerate_identity);
}

// --- elementary symmetric polynomials ----------------------------------------------

TEST(ElementarySymmetric, Singleton) {
    auto a = Scalar::from_u64(9);
    auto e = elementary_symmetric(std::vector{a});
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0], a);
}

TEST(ElementarySymmetric, TwoValues) {
    auto e = elementary_symmetric(std::vector{Scalar::from_u64(2), Scalar::from_u64(3)});
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0], Scalar::from_u64(5));
    EXPECT_EQ(e[1], Scalar::from_u64(6));
}

TEST(ElementarySymmetric, MatchesSubsetEnumeration) {
    auto rng = Rng::seeded(4);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Scalar> v;
        for (int i = 0; i < 6; ++i) v.push_back(rand_scalar(rng));
        std::vector<Scalar> brute(v.size());
        for (unsigned mask = 1; mask < (1u << v.size()); ++mask) {
            Scalar prod = Scalar::one();
            for (std::size_t i = 0; i < v.size(); ++i)
                if (mask & (1u << i)) prod *= v[i];
            brute[static_cast<std::size_t>(__builtin_popcount(mask)) - 1] += prod;
        }
        EXPECT_EQ(elementary_symmetric(v), brute);
    }
}

TEST(ElementarySymmetric, EmptyRejected) {
    EXPECT_EQ(code_of([] { (void)elementary_symmetric(std::vector<Scalar>{}); }), Errc::invalid_input);
}

// --- encryption / decryption --------------------------------------------------------

TEST(Encrypt, SingletonRoundTripBothModes) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(5);
    std::vector<std::string> s{"solo"};
    auto usk = extract_user_key(keys.msk, "solo");
    auto pk_mode = encrypt_pk(keys.pk, s, rng);
    auto msk_mode = encrypt_msk(keys.msk, keys.pk, s, rng);
    EXPECT_EQ(decrypt(usk, s, pk_mode.ct, keys.pk), pk_mode.key);
    EXPECT_EQ(decrypt(usk, s, msk_mode.ct, keys.pk), msk_mode.key);
}

TEST(Encrypt, RoundTripPropertyAllSizes) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(6);
    for (std::size_t n : {2, 5, 12, 32}) {
        auto s = test::random_identities(n, rng);
        for (bool msk_mode : {false, true}) {
            auto enc = msk_mode ? encrypt_msk(keys.msk, keys.pk, s, rng) : encrypt_pk(keys.pk, s, rng);
            for (const auto& u : s)
                ASSERT_EQ(decrypt(extract_user_key(keys.msk, u), s, enc.ct, keys.pk), enc.key)
                    << "n=" << n << " msk=" << msk_mode << " u=" << u;
        }
    }
}

TEST(Encrypt, MemberOrderDoesNotMatter) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(7);
    auto s = identities(6);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    std::reverse(s.begin(), s.end());
    EXPECT_EQ(decrypt(extract_user_key(keys.msk, s[2]), s, enc.ct, keys.pk), enc.key);
}

TEST(Encrypt, RejectsBadMemberSets) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(8);
    auto too_many = identities(9);
    std::vector<std::string> dup{"a", "b", "a"};
    std::vector<std::string> empty;
    EXPECT_EQ(code_of([&] { (void)encrypt_pk(keys.pk, too_many, rng); }), Errc::capacity_exceeded);
    EXPECT_EQ(code_of([&] { (void)encrypt_msk(keys.msk, keys.pk, too_many, rng); }), Errc::capacity_exceeded);
    EXPECT_EQ(code_of([&] { (void)encrypt_pk(keys.pk, dup, rng); }), Errc::invalid_input);
    EXPECT_EQ(code_of([&] { (void)encrypt_msk(keys.msk, keys.pk, empty, rng); }), Errc::invalid_input);
}

TEST(Encrypt, CrossModeEqualityWithInjectedK) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = test::random_identities(1 + rng.uniform(32), rng);
        auto k = rand_scalar(rng);
        auto a = ibbe::testing::encrypt_pk_with(keys.pk, s, k);
        auto b = ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k);
        ASSERT_EQ(a.ct.serialize(), b.ct.serialize());
        ASSERT_EQ(a.key, b.key);
    }
}

TEST(Encrypt, MasterModeUsesOneExponentiationForC2) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(10);
    for (std::size_t n : {1, 32}) {
        OpScope scope;
        (void)encrypt_msk(keys.msk, keys.pk, identities(n), rng);
        auto d = scope.delta();
        EXPECT_EQ(d.g2_exp, 2u) << "C2 and C3";
        EXPECT_EQ(d.g1_exp, 1u);
        EXPECT_EQ(d.gt_exp, 1u);
    }
}

TEST(Decrypt, NonMemberRejectedAndForcedPathWrong) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(11);
    auto s = identities(4);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    auto outsider = extract_user_key(keys.msk, "outsider");
    EXPECT_EQ(code_of([&] { (void)decrypt(outsider, s, enc.ct, keys.pk); }), Errc::not_a_member);
    EXPECT_FALSE(ibbe::testing::decrypt_unchecked(outsider, s, enc.ct, keys.pk) == enc.key);
    auto with_outsider = s;
    with_outsider.push_back("outsider");
    EXPECT_FALSE(ibbe::testing::decrypt_unchecked(outsider, with_outsider, enc.ct, keys.pk) == enc.key);
}

TEST(Decrypt, WrongKeyForIdentityFails) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(12);
    auto s = identities(3);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    auto usk = extract_user_key(keys.msk, s[1]);
    usk.identity = s[0];
    EXPECT_FALSE(decrypt(usk, s, enc.ct, keys.pk) == enc.key);
}

// --- membership updates -----------------------------------------------------------

TEST(AddUser, NewAndOldMembersRecoverOriginalKey) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(13);
    auto s = identities(3);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    auto ct = add_user_msk(keys.msk, keys.pk, enc.ct, s, "newbie");
    auto s2 = s;
    s2.push_back("newbie");
    EXPECT_EQ(decrypt(extract_user_key(keys.msk, "newbie"), s2, ct, keys.pk), enc.key);
    EXPECT_EQ(decrypt(extract_user_key(keys.msk, s[0]), s2, ct, keys.pk), enc.key);
    EXPECT_EQ(ct.c1, enc.ct.c1);
}

TEST(AddUser, MatchesFreshEncryption) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(14);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = test::random_identities(1 + rng.uniform(31), rng);
        auto k = rand_scalar(rng);
        auto before = ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k);
        auto ct = add_user_msk(keys.msk, keys.pk, before.ct, s, "added");
        s.push_back("added");
        ASSERT_EQ(ct, ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k).ct);
    }
}

TEST(AddUser, Rejections) {
    const auto& keys = system_keys(2);
    auto rng = Rng::seeded(15);
    auto s = identities(2);
    auto enc = encrypt_msk(keys.msk, keys.pk, std::span(s).first(1), rng);
    EXPECT_EQ(code_of([&] { (void)add_user_msk(keys.msk, keys.pk, enc.ct, std::span(s).first(1), s[0]); }),
              Errc::invalid_input);
    auto full = encrypt_msk(keys.msk, keys.pk, s, rng);
    EXPECT_EQ(code_of([&] { (void)add_user_msk(keys.msk, keys.pk, full.ct, s, "third"); }), Errc::capacity_exceeded);
}

TEST(AddUser, PublicKeyBaselineReencrypts) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(16);
    auto s = identities(4);
    auto enc = add_user_pk(keys.pk, s, "extra", rng);
    s.push_back("extra");
    EXPECT_EQ(decrypt(extract_user_key(keys.msk, "extra"), s, enc.ct, keys.pk), enc.key);
}

TEST(RemoveUser, RemainingDecryptRemovedCannot) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(17);
    auto s = identities(5);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    auto next = remove_user_msk(keys.msk, keys.pk, enc.ct, s, s[2], rng);
    auto removed = extract_user_key(keys.msk, s[2]);
    auto old_members = s;
    s.erase(s.begin() + 2);
    EXPECT_FALSE(next.key == enc.key);
    for (const auto& u : s) EXPECT_EQ(decrypt(extract_user_key(keys.msk, u), s, next.ct, keys.pk), next.key);
    EXPECT_FALSE(ibbe::testing::decrypt_unchecked(removed, old_members, next.ct, keys.pk) == next.key);
    EXPECT_FALSE(ibbe::testing::decrypt_unchecked(removed, s, next.ct, keys.pk) == next.key);
}

TEST(RemoveUser, MatchesFreshEncryption) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(18);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = test::random_identities(2 + rng.uniform(31), rng);
        auto before = encrypt_msk(keys.msk, keys.pk, s, rng);
        auto victim = s[rng.uniform(s.size())];
        auto k = rand_scalar(rng);
        auto after = ibbe::testing::remove_user_msk_with(keys.msk, keys.pk, before.ct, s, victim, k);
        std::erase(s, victim);
        auto fresh = ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k);
        ASSERT_EQ(after.ct, fresh.ct);
        ASSERT_EQ(after.key, fresh.key);
    }
}

TEST(RemoveUser, NonMemberRejected) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(19);
    auto s = identities(2);
    auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
    EXPECT_EQ(code_of([&] { (void)remove_user_msk(keys.msk, keys.pk, enc.ct, s, "ghost", rng); }),
              Errc::invalid_input);
}

TEST(RemoveUser, RevocationSoundness) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(20);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = test::random_identities(2 + rng.uniform(7), rng);
        auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
        auto victim = s[rng.uniform(s.size())];
        auto next = remove_user_msk(keys.msk, keys.pk, enc.ct, s, victim, rng);
        auto usk = extract_user_key(keys.msk, victim);
        ASSERT_FALSE(ibbe::testing::decrypt_unchecked(usk, s, next.ct, keys.pk) == next.key) << trial;
    }
}

TEST(Rekey, AllMembersGetFreshKey) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(21);
    auto s = identities(6);
    auto enc = encrypt_pk(keys.pk, s, rng);
    auto next = rekey(enc.ct, keys.pk, rng);
    EXPECT_FALSE(next.key == enc.key);
    EXPECT_EQ(next.ct.c3, enc.ct.c3);
    for (const auto& u : s) EXPECT_EQ(decrypt(extract_user_key(keys.msk, u), s, next.ct, keys.pk), next.key);
}

TEST(Rekey, MatchesFreshEncryption) {
    const auto& keys = system_keys(32);
    auto rng = Rng::seeded(22);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = test::random_identities(1 + rng.uniform(32), rng);
        auto before = encrypt_pk(keys.pk, s, rng);
        auto k = rand_scalar(rng);
        EXPECT_EQ(ibbe::testing::rekey_with(before.ct, keys.pk, k).ct, ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k).ct);
    }
}

// --- complexity via op counters -----------------------------------------------------

namespace {

double scalar_muls(auto&& f) {
    OpScope scope;
    f();
    return static_cast<double>(scope.delta().scalar_mul);
}

}  // namespace

TEST(Complexity, EncryptAndDecryptExponents) {
    const auto& keys = system_keys(64);
    auto rng = Rng::seeded(23);
    std::vector<double> xs, msk, pk, dec;
    for (std::size_t n : {8, 16, 32, 64}) {
        auto s = identities(n);
        auto usk = extract_user_key(keys.msk, s[0]);
        auto enc = encrypt_msk(keys.msk, keys.pk, s, rng);
        xs.push_back(static_cast<double>(n));
        msk.push_back(scalar_muls([&] { (void)encrypt_msk(keys.msk, keys.pk, s, rng); }));
        pk.push_back(scalar_muls([&] { (void)encrypt_pk(keys.pk, s, rng); }));
        dec.push_back(scalar_muls([&] { (void)decrypt(usk, s, enc.ct, keys.pk); }));
    }
    EXPECT_NEAR(test::loglog_slope(xs, msk), 1.0, 0.2);
    EXPECT_NEAR(test::loglog_slope(xs, pk), 2.0, 0.2);
    EXPECT_NEAR(test::loglog_slope(xs, dec), 2.0, 0.2);
}

TEST(Complexity, UpdatesAreConstant) {
    const auto& keys = system_keys(200);
    auto rng = Rng::seeded(24);
    std::vector<OpCounts> add, rem, rk;
    for (std::size_t n : {2, 200}) {
        auto s = identities(n);
        auto enc = encrypt_msk(keys.msk, keys.pk, std::span(s).first(n - 1), rng);
        OpScope a;
        (void)add_user_msk(keys.msk, keys.pk, enc.ct, std::span(s).first(n - 1), s.back());
        add.push_back(a.delta());
        OpScope r;
        (void)remove_user_msk(keys.msk, keys.pk, enc.ct, std::span(s).first(n - 1), s[0], rng);
        rem.push_back(r.delta());
        OpScope k;
        (void)rekey(enc.ct, keys.pk, rng);
        rk.push_back(k.delta());
    }
    EXPECT_EQ(add[0], add[1]);
    EXPECT_EQ(add[0].g2_exp, 2u);
    EXPECT_EQ(rem[0], rem[1]);
    EXPECT_EQ(rk[0], rk[1]);
}

// --- serialization ------------------------------------------------------------------

TEST(Serialization, CiphertextSizeIsConstant) {
    const auto& keys = system_keys(1000);
    auto rng = Rng::seeded(25);
    for (std::size_t n : {1, 10, 1000}) {
        auto enc = encrypt_msk(keys.msk, keys.pk, identities(n), rng);
        EXPECT_EQ(enc.ct.serialize().size(), BroadcastCiphertext::kEncodedSize);
    }
}

TEST(Serialization, RoundTrips) {
    const auto& keys = system_keys(8);
    auto rng = Rng::seeded(26);
    auto pk2 = PublicKey::deserialize(keys.pk.serialize());
    EXPECT_EQ(pk2.w, keys.pk.w);
    EXPECT_EQ(pk2.v, keys.pk.v);
    EXPECT_EQ(pk2.h_powers, keys.pk.h_powers);

    auto usk = extract_user_key(keys.msk, "alice");
    EXPECT_EQ(UserSecretKey::deserialize(usk.serialize()), usk);

    auto enc = encrypt_msk(keys.msk, keys.pk, identities(3), rng);
    EXPECT_EQ(BroadcastCiphertext::deserialize(enc.ct.serialize()), enc.ct);

    auto msk2 = detail::decode_master_key(detail::encode_master_key(keys.msk));
    EXPECT_EQ(msk2.g, keys.msk.g);
    EXPECT_EQ(msk2.gamma, keys.msk.gamma);
}

TEST(Serialization, VersionAndLengthChecked) {
    const auto& keys = system_keys(8);
    auto bytes = keys.pk.serialize();
    EXPECT_EQ(bytes.size(), 1 + 48 + 576 + 4 + 9 * 96u);
    auto bad = bytes;
    bad[0] = 2;
    EXPECT_EQ(code_of([&] { (void)PublicKey::deserialize(bad); }), Errc::malformed_encoding);
    bad = bytes;
    bad.pop_back();
    EXPECT_EQ(code_of([&] { (void)PublicKey::deserialize(bad); }), Errc::malformed_encoding);

    auto usk = extract_user_key(keys.msk, "alice").serialize();
    usk[0] = 9;
    EXPECT_EQ(code_of([&] { (void)UserSecretKey::deserialize(usk); }), Errc::malformed_encoding);

    Bytes short_ct(BroadcastCiphertext::kEncodedSize - 1, 0);
    EXPECT_EQ(code_of([&] { (void)BroadcastCiphertext::deserialize(short_ct); }), Errc::malformed_encoding);
}
