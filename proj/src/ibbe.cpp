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

#include "gac/ibbe.hpp"

#include <algorithm>
#include <unordered_set>

#include "gac/errors.hpp"
#include "gac/ibbe_testing.hpp"
#include "gac/op_counter.hpp"

namespace gac::ibbe {

namespace {

constexpr std::uint8_t kFormatVersion = 1;

bool contains(Members members, std::string_view id) {
    return std::find(members.begin(), members.end(), id) != members.end();
}

void check_member_set(Members members, std::size_t capacity) {
    if (members.empty()) throw Error(Errc::invalid_input, "member set is empty");
    if (members.size() > capacity)
        throw Error(Errc::capacity_exceeded,
                    std::to_string(members.size()) + " members exceed capacity " + std::to_string(capacity));
    std::unordered_set<std::string_view> seen;
    for (const auto& m : members) {
        if (m.empty()) throw Error(Errc::invalid_input, "empty identity");
        if (!seen.insert(m).second) throw Error(Errc::invalid_input, "duplicate identity '" + m + "'");
    }
}

std::vector<Scalar> hashes_of(Members members) {
    std::vector<Scalar> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(hash_to_scalar(m));
    return out;
}

// prod_{u in S} (gamma + H(u))
Scalar membership_exponent(const Scalar& gamma, Members members) {
    Scalar prod = Scalar::one();
    bool first = true;
    for (const auto& m : members) {
        auto f = gamma + hash_to_scalar(m);
        prod = first ? f : prod * f;
        first = false;
    }
    return prod;
}

// Builds the ciphertext around a precomputed C3.
Encryption finish(const PublicKey& pk, const G2& c3, const Scalar& k) {
    Encryption out;
    out.key.bk = pk.v.pow(k);
    out.ct.c1 = pk.w.pow(-k);
    out.ct.c2 = c3.pow(k);
    out.ct.c3 = c3;
    return out;
}

// h^{prod(gamma + H(u))} expanded over the public powers:
//   prod_{i=1..n}(x + H_i) = x^n + E_1 x^{n-1} + ... + E_n.
G2 expand_over_powers(const PublicKey& pk, Members members) {
    const auto n = members.size();
    auto e = elementary_symmetric(hashes_of(members));
    G2 acc = pk.h_powers[n];
    for (std::size_t j = 1; j <= n; ++j) acc = acc * pk.h_powers[n - j].pow(e[j - 1]);
    return acc;
}

BroadcastKey decrypt_impl(const UserSecretKey& usk, Members members, const BroadcastCiphertext& ct,
                          const PublicKey& pk) {
    ++ops::current().ibbe_decrypt;
    std::vector<Scalar> others;
    others.reserve(members.size());
    for (const auto& m : members)
        if (m != usk.identity) others.push_back(hash_to_scalar(m));
    if (others.size() + 1 > pk.h_powers.size())
        throw Error(Errc::capacity_exceeded, "member set exceeds public key capacity");

    // With q(x) = prod_{u' != u}(x + H(u')) = sum_j E_j x^{r-j}, r = |others|:
    //   p(x) = (q(x) - q(0)) / x,   q(0) = E_r = prod H(u')
    //   b_k = (e(C1, h^{p(gamma)}) * e(usk, C2))^{1 / q(0)}
    G2 h_p;
    Scalar q0 = Scalar::one();
    if (!others.empty()) {
        const auto r = others.size();
        auto e = elementary_symmetric(others);
        q0 = e[r - 1];
        h_p = pk.h_powers[r - 1];  // E_0 = 1 term
        for (std::size_t j = 1; j < r; ++j) h_p = h_p * pk.h_powers[r - 1 - j].pow(e[j - 1]);
    }
    auto blinded = pairing(ct.c1, h_p) * pairing(usk.sk, ct.c2);
    return {blinded.pow(q0.inverse())};
}

}  // namespace

// --- serialization --------------------------------------------------------------

Bytes PublicKey::serialize() const {
    ByteWriter w;
    w.u8(kFormatVersion);
    w.raw(this->w.encode());
    w.raw(v.encode());
    w.u32(static_cast<std::uint32_t>(h_powers.size()));
    for (const auto& h : h_powers) w.raw(h.encode());
    return std::move(w).take();
}

PublicKey PublicKey::deserialize(ByteView in) {
    ByteReader r(in);
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported public key version");
    PublicKey pk;
    pk.w = G1::decode(r.raw(G1::kEncodedSize));
    pk.v = GT::decode(r.raw(GT::kEncodedSize));
    auto count = r.u32();
    if (count < 2) throw Error(Errc::malformed_encoding, "public key needs at least two powers");
    if (r.remaining() != std::size_t{count} * G2::kEncodedSize)
        throw Error(Errc::malformed_encoding, "public key length mismatch");
    pk.h_powers.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) pk.h_powers.push_back(G2::decode(r.raw(G2::kEncodedSize)));
    r.expect_end();
    return pk;
}

Bytes UserSecretKey::serialize() const {
    ByteWriter w;
    w.u8(kFormatVersion);
    w.str(identity);
    w.raw(sk.encode());
    return std::move(w).take();
}

UserSecretKey UserSecretKey::deserialize(ByteView in) {
    ByteReader r(in);
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported user key version");
    UserSecretKey usk;
    usk.identity = r.str();
    if (usk.identity.empty()) throw Error(Errc::malformed_encoding, "user key without identity");
    usk.sk = G1::decode(r.raw(G1::kEncodedSize));
    r.expect_end();
    return usk;
}

Bytes BroadcastCiphertext::serialize() const {
    ByteWriter w;
    w.u8(kFormatVersion);
    w.raw(c1.encode());
    w.raw(c2.encode());
    w.raw(c3.encode());
    return std::move(w).take();
}

BroadcastCiphertext BroadcastCiphertext::deserialize(ByteView in) {
    if (in.size() != kEncodedSize) throw Error(Errc::malformed_encoding, "ciphertext length mismatch");
    ByteReader r(in);
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported ciphertext version");
    BroadcastCiphertext ct;
    ct.c1 = G1::decode(r.raw(G1::kEncodedSize));
    ct.c2 = G2::decode(r.raw(G2::kEncodedSize));
    ct.c3 = G2::decode(r.raw(G2::kEncodedSize));
    return ct;
}

namespace detail {

Bytes encode_master_key(const MasterSecretKey& msk) {
    ByteWriter w;
    w.u8(kFormatVersion);
    w.raw(msk.g.encode());
    w.raw(msk.gamma.encode());
    return std::move(w).take();
}

MasterSecretKey decode_master_key(ByteView in) {
    ByteReader r(in);
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported master key version");
    MasterSecretKey msk;
    msk.g = G1::decode(r.raw(G1::kEncodedSize));
    msk.gamma = Scalar::decode(r.raw(Scalar::kEncodedSize));
    r.expect_end();
    if (msk.gamma.is_zero()) throw Error(Errc::malformed_encoding, "master key exponent is zero");
    return msk;
}

}  // namespace detail

// --- scheme ---------------------------------------------------------------------

SystemKeys setup(std::size_t capacity, Rng& rng) {
    if (capacity == 0) throw Error(Errc::invalid_capacity, "capacity must be at least 1");
    SystemKeys keys;
    keys.msk.g = rand_g1(rng);
    keys.msk.gamma = rand_scalar(rng);
    auto h = rand_g2(rng);

    keys.pk.w = keys.msk.g.pow(keys.msk.gamma);
    keys.pk.v = pairing(keys.msk.g, h);
    keys.pk.h_powers.reserve(capacity + 1);
    keys.pk.h_powers.push_back(h);
    for (std::size_t i = 1; i <= capacity; ++i) keys.pk.h_powers.push_back(keys.pk.h_powers.back().pow(keys.msk.gamma));
    return keys;
}

UserSecretKey extract_user_key(const MasterSecretKey& msk, std::string_view identity) {
    auto f = msk.gamma + hash_to_scalar(identity);
    if (f.is_zero()) throw Error(Errc::degenerate_identity, "gamma + H(u) = 0 for '" + std::string(identity) + "'");
    return {std::string(identity), msk.g.pow(f.inverse())};
}

bool user_key_valid(const PublicKey& pk, const UserSecretKey& usk) {
    if (pk.h_powers.size() < 2) return false;
    auto target = pk.h_powers[1] * pk.h_powers[0].pow(hash_to_scalar(usk.identity));
    return pairing(usk.sk, target) == pk.v;
}

std::vector<Scalar> elementary_symmetric(std::span<const Scalar> values) {
    if (values.empty()) throw Error(Errc::invalid_input, "elementary symmetric polynomials of an empty list");
    // e[j] holds E_{j+1}; E_0 = 1 is implicit.
    std::vector<Scalar> e(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& x = values[i];
        for (std::size_t j = i; j >= 1; --j) e[j] += x * e[j - 1];
        e[0] += x;
    }
    return e;
}

Encryption encrypt_pk(const PublicKey& pk, Members members, Rng& rng) {
    return testing::encrypt_pk_with(pk, members, rand_scalar(rng));
}

Encryption encrypt_msk(const MasterSecretKey& msk, const PublicKey& pk, Members members, Rng& rng) {
    return testing::encrypt_msk_with(msk, pk, members, rand_scalar(rng));
}

BroadcastKey decrypt(const UserSecretKey& usk, Members members, const BroadcastCiphertext& ct,
                     const PublicKey& pk) {
    if (!contains(members, usk.identity))
        throw Error(Errc::not_a_member, "'" + usk.identity + "' is not in the broadcast set");
    return decrypt_impl(usk, members, ct, pk);
}

BroadcastCiphertext add_user_msk(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                                 Members members, std::string_view u_add) {
    if (u_add.empty()) throw Error(Errc::invalid_input, "empty identity");
    if (contains(members, u_add)) throw Error(Errc::invalid_input, "'" + std::string(u_add) + "' is already a member");
    if (members.size() + 1 > pk.capacity()) throw Error(Errc::capacity_exceeded, "broadcast set is full");
    ++ops::current().ibbe_add;
    auto f = msk.gamma + hash_to_scalar(u_add);
    return {ct.c1, ct.c2.pow(f), ct.c3.pow(f)};
}

Encryption add_user_pk(const PublicKey& pk, Members members, std::string_view u_add, Rng& rng) {
    std::vector<std::string> extended(members.begin(), members.end());
    extended.emplace_back(u_add);
    return encrypt_pk(pk, extended, rng);
}

Encryption remove_user_msk(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                           Members members, std::string_view u_rem, Rng& rng) {
    return testing::remove_user_msk_with(msk, pk, ct, members, u_rem, rand_scalar(rng));
}

Encryption rekey(const BroadcastCiphertext& ct, const PublicKey& pk, Rng& rng) {
    return testing::rekey_with(ct, pk, rand_scalar(rng));
}

namespace testing {

Encryption encrypt_pk_with(const PublicKey& pk, Members members, const Scalar& k) {
    check_member_set(members, pk.capacity());
    ++ops::current().ibbe_encrypt;
    return finish(pk, expand_over_powers(pk, members), k);
}

Encryption encrypt_msk_with(const MasterSecretKey& msk, const PublicKey& pk, Members members, const Scalar& k) {
    check_member_set(members, pk.capacity());
    ++ops::current().ibbe_encrypt;
    auto prod = membership_exponent(msk.gamma, members);
    Encryption out;
    out.key.bk = pk.v.pow(k);
    out.ct.c1 = pk.w.pow(-k);
    out.ct.c2 = pk.h().pow(k * prod);
    out.ct.c3 = pk.h().pow(prod);
    return out;
}

Encryption remove_user_msk_with(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                                Members members, std::string_view u_rem, const Scalar& k) {
    if (!contains(members, u_rem))
        throw Error(Errc::invalid_input, "'" + std::string(u_rem) + "' is not in the broadcast set");
    ++ops::current().ibbe_remove;
    auto f = msk.gamma + hash_to_scalar(u_rem);
    return finish(pk, ct.c3.pow(f.inverse()), k);
}

Encryption rekey_with(const BroadcastCiphertext& ct, const PublicKey& pk, const Scalar& k) {
    ++ops::current().ibbe_rekey;
    return finish(pk, ct.c3, k);
}

BroadcastKey decrypt_unchecked(const UserSecretKey& usk, Members members, const BroadcastCiphertext& ct,
                               const PublicKey& pk) {
    return decrypt_impl(usk, members, ct, pk);
}

}  // namespace testing

}  // namespace gac::ibbe
