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

#include "gac/errors.hpp"
#include "gac/pairing.hpp"

using namespace gac;

TEST(HashToScalar, Deterministic) { EXPECT_EQ(hash_to_scalar("alice"), hash_to_scalar("alice")); }

TEST(HashToScalar, DistinctIdentities) { EXPECT_FALSE(hash_to_scalar("alice") == hash_to_scalar("bob")); }

TEST(HashToScalar, EmptyIdentityRejected) {
    try {
        (void)hash_to_scalar("");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_input);
    }
}

TEST(HashToScalar, NeverZeroOverFuzzRun) {
    auto rng = Rng::seeded(11);
    std::string id(24, '\0');
    for (int i = 0; i < 100000; ++i) {
        for (auto& c : id) c = static_cast<char>(rng.next_u64());
        ASSERT_FALSE(hash_to_scalar(id).is_zero()) << i;
    }
}

TEST(Scalar, FieldArithmetic) {
    auto a = Scalar::from_u64(2), b = Scalar::from_u64(3);
    EXPECT_EQ(a + b, Scalar::from_u64(5));
    EXPECT_EQ(a * b, Scalar::from_u64(6));
    EXPECT_EQ(b - a, Scalar::one());
    EXPECT_EQ(a - a, Scalar());
    EXPECT_EQ(a + (-a), Scalar());
    EXPECT_EQ(a * a.inverse(), Scalar::one());
    EXPECT_THROW((void)Scalar().inverse(), Error);
}

TEST(Scalar, EncodingRoundTripAndCanonicality) {
    auto rng = Rng::seeded(12);
    for (int i = 0; i < 100; ++i) {
        auto s = rand_scalar(rng);
        auto enc = s.encode();
        EXPECT_EQ(Scalar::decode(enc), s);
    }
    std::array<std::uint8_t, 32> all_ones{};
    all_ones.fill(0xff);
    EXPECT_THROW((void)Scalar::decode(all_ones), Error);
    EXPECT_THROW((void)Scalar::decode(Bytes(31, 0)), Error);
}

TEST(Pairing, ZeroExponentGivesIdentity) {
    auto e = pairing(G1::generator(), G2::generator());
    EXPECT_FALSE(e.is_identity());
    EXPECT_TRUE(e.pow(Scalar()).is_identity());
}

TEST(Pairing, SquareMovesAcrossArguments) {
    auto two = Scalar::from_u64(2);
    auto g = G1::generator();
    auto h = G2::generator();
    EXPECT_EQ(pairing(g.pow(two), h), pairing(g, h.pow(two)));
    EXPECT_EQ(pairing(g.pow(two), h), pairing(g, h).pow(two));
}

TEST(Pairing, BilinearityOverRandomPairs) {
    auto rng = Rng::seeded(13);
    auto g = G1::generator();
    auto h = G2::generator();
    auto base = pairing(g, h);
    for (int i = 0; i < 100; ++i) {
        auto x = rand_scalar(rng), y = rand_scalar(rng);
        auto lhs = pairing(g.pow(x), h.pow(y));
        ASSERT_EQ(lhs, base.pow(x * y)) << i;
        ASSERT_EQ(lhs, pairing(g.pow(x * y), h)) << i;
    }
}

TEST(Pairing, IdentityInputs) {
    EXPECT_TRUE(pairing(G1(), G2::generator()).is_identity());
    EXPECT_TRUE(pairing(G1::generator(), G2()).is_identity());
}

TEST(Groups, ExponentRules) {
    auto rng = Rng::seeded(14);
    auto a = rand_scalar(rng), b = rand_scalar(rng);
    auto g = rand_g1(rng);
    auto h = rand_g2(rng);
    EXPECT_EQ(g.pow(a) * g.pow(b), g.pow(a + b));
    EXPECT_EQ(h.pow(a).pow(b), h.pow(a * b));
    EXPECT_TRUE(g.pow(a) * g.pow(-a) == G1());
}

TEST(Serialization, RoundTripAllKinds) {
    auto rng = Rng::seeded(15);
    for (int i = 0; i < 20; ++i) {
        auto s = rand_scalar(rng);
        auto g = rand_g1(rng);
        auto h = rand_g2(rng);
        auto t = pairing(g, h);
        EXPECT_EQ(Scalar::decode(s.encode()), s);
        EXPECT_EQ(G1::decode(g.encode()), g);
        EXPECT_EQ(G2::decode(h.encode()), h);
        EXPECT_EQ(GT::decode(t.encode()), t);
    }
    EXPECT_EQ(G1::decode(G1().encode()), G1());
    EXPECT_EQ(G2::decode(G2().encode()), G2());
    EXPECT_EQ(GT::decode(GT().encode()), GT());
}

TEST(Serialization, FixedSizes) {
    auto p = curve_params();
    EXPECT_EQ(p.scalar_bytes, 32u);
    EXPECT_EQ(p.g1_bytes, 48u);
    EXPECT_EQ(p.g2_bytes, 96u);
    EXPECT_EQ(p.gt_bytes, 576u);
    EXPECT_GE(p.security_bits, 128u);
    EXPECT_EQ(G1::generator().encode().size(), p.g1_bytes);
    EXPECT_EQ(G2::generator().encode().size(), p.g2_bytes);
}

TEST(Serialization, RejectsInvalidEncodings) {
    Bytes junk1(G1::kEncodedSize, 0x11);
    EXPECT_THROW((void)G1::decode(junk1), Error);
    Bytes junk2(G2::kEncodedSize, 0x13);
    EXPECT_THROW((void)G2::decode(junk2), Error);
    EXPECT_THROW((void)G1::decode(Bytes(47, 0)), Error);

    // An F_p12 element outside the order-p subgroup.
    auto t = pairing(G1::generator(), G2::generator()).encode();
    t[GT::kEncodedSize - 1] ^= 1;
    EXPECT_THROW((void)GT::decode(t), Error);
}
