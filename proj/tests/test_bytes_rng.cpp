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

#include <set>

#include "gac/bytes.hpp"
#include "gac/errors.hpp"
#include "gac/op_counter.hpp"
#include "gac/rng.hpp"
#include "gac/sealing.hpp"
#include "gac/symmetric.hpp"

using namespace gac;

TEST(Bytes, WriterReaderRoundTrip) {
    ByteWriter w;
    w.u8(7);
    w.u32(0xdeadbeef);
    w.u64(0x0102030405060708ULL);
    w.str("hello");
    w.blob(Bytes{1, 2, 3});
    auto buf = std::move(w).take();

    ByteReader r(buf);
    EXPECT_EQ(r.u8(), 7);
    EXPECT_EQ(r.u32(), 0xdeadbeefu);
    EXPECT_EQ(r.u64(), 0x0102030405060708ULL);
    EXPECT_EQ(r.str(), "hello");
    EXPECT_EQ(r.blob(), (Bytes{1, 2, 3}));
    EXPECT_NO_THROW(r.expect_end());
}

TEST(Bytes, BigEndianLayout) {
    ByteWriter w;
    w.u32(0x01020304);
    EXPECT_EQ(w.bytes(), (Bytes{1, 2, 3, 4}));
}

TEST(Bytes, TruncationIsMalformed) {
    ByteWriter w;
    w.str("abcdef");
    auto buf = std::move(w).take();
    buf.pop_back();
    ByteReader r(buf);
    try {
        (void)r.str();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::malformed_encoding);
    }
}

TEST(Bytes, TrailingBytesRejected) {
    Bytes buf{1, 2};
    ByteReader r(buf);
    (void)r.u8();
    EXPECT_THROW(r.expect_end(), Error);
}

TEST(Bytes, Hex) {
    Bytes b{0x00, 0xab, 0xff};
    EXPECT_EQ(to_hex(b), "00abff");
    EXPECT_EQ(from_hex("00ABff"), b);
    EXPECT_THROW((void)from_hex("abc"), Error);
    EXPECT_THROW((void)from_hex("zz"), Error);
}

TEST(Rng, SeededIsDeterministic) {
    auto a = Rng::seeded(42), b = Rng::seeded(42), c = Rng::seeded(43);
    for (int i = 0; i < 1000; ++i) {
        auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        (void)c;
    }
    auto d = Rng::seeded(42);
    EXPECT_NE(d.next_u64(), c.next_u64());
    EXPECT_TRUE(a.deterministic());
    EXPECT_FALSE(Rng::system().deterministic());
}

TEST(Rng, UniformStaysInRangeAndCoversIt) {
    auto rng = Rng::seeded(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        auto v = rng.uniform(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
    EXPECT_EQ(rng.uniform(1), 0u);
}

TEST(OpCounter, ScopeDeltaAndColumns) {
    OpScope scope;
    ++ops::current().g2_exp;
    ++ops::current().pairing;
    auto d = scope.delta();
    EXPECT_EQ(d.g2_exp, 1u);
    EXPECT_EQ(d.pairing, 1u);
    EXPECT_EQ(d.group_ops(), 2u);
    EXPECT_EQ(OpCounts::column_names().size(), d.values().size());
}

TEST(Aead, RoundTripAndTamper) {
    auto rng = Rng::seeded(5);
    Key256 key{};
    rng.fill(key);
    Bytes msg{1, 2, 3, 4, 5};
    Bytes aad{9};
    auto blob = aead::seal(key, msg, aad, rng);
    EXPECT_EQ(blob.size(), msg.size() + aead::kOverhead);
    EXPECT_EQ(aead::open(key, blob, aad), msg);

    auto bad = blob;
    bad.back() ^= 1;
    EXPECT_THROW((void)aead::open(key, bad, aad), Error);
    EXPECT_THROW((void)aead::open(key, blob, Bytes{8}), Error);
    EXPECT_THROW((void)aead::open(key, ByteView(blob).first(10), aad), Error);
}

TEST(Aead, FreshNoncePerSeal) {
    auto rng = Rng::seeded(6);
    Key256 key{};
    std::set<Bytes> nonces;
    for (int i = 0; i < 500; ++i) {
        auto blob = aead::seal(key, Bytes{1}, {}, rng);
        auto n = aead::nonce_of(blob);
        nonces.emplace(n.begin(), n.end());
    }
    EXPECT_EQ(nonces.size(), 500u);
}

TEST(Sealer, RoundTripLabelAndKeyBinding) {
    auto rng = Rng::seeded(7);
    Key256 k1{}, k2{};
    rng.fill(k1);
    rng.fill(k2);
    Sealer s1(k1), s2(k2);
    auto gk = GroupKey::random(rng);
    auto blob = s1.seal(gk.bytes, "group-key:a", rng);
    auto back = s1.unseal(blob, "group-key:a");
    EXPECT_TRUE(std::equal(back.begin(), back.end(), gk.bytes.begin()));
    EXPECT_THROW((void)s2.unseal(blob, "group-key:a"), Error);
    EXPECT_THROW((void)s1.unseal(blob, "group-key:b"), Error);
    blob[blob.size() / 2] ^= 0x40;
    EXPECT_THROW((void)s1.unseal(blob, "group-key:a"), Error);
}

TEST(Sealer, KeyFile) {
    auto rng = Rng::seeded(8);
    auto path = std::filesystem::temp_directory_path() / "gac_test_sealing.key";
    std::filesystem::remove(path);
    auto created = Sealer::create_file(path, rng);
    auto loaded = Sealer::from_file(path);
    auto blob = created.seal(Bytes{4, 2}, "x", rng);
    EXPECT_EQ(loaded.unseal(blob, "x"), (Bytes{4, 2}));
    auto perms = std::filesystem::status(path).permissions();
    EXPECT_EQ(perms & std::filesystem::perms::group_read, std::filesystem::perms::none);
    std::filesystem::remove(path);
}
