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

#include "gac/pairing.hpp"

#include <cstring>

#include <blst_aux.h>
#include <openssl/evp.h>

#include "gac/errors.hpp"
#include "gac/op_counter.hpp"

namespace gac {

namespace {

constexpr std::size_t kScalarBits = 255;

void require_size(ByteView in, std::size_t n, const char* what) {
    if (in.size() != n) throw Error(Errc::malformed_encoding, std::string(what) + " has wrong length");
}

}  // namespace

// --- Scalar -----------------------------------------------------------------

Scalar::Scalar() noexcept { std::memset(&v_, 0, sizeof v_); }

Scalar Scalar::from_u64(std::uint64_t v) noexcept {
    const std::uint64_t limbs[4] = {v, 0, 0, 0};
    Scalar s;
    blst_fr_from_uint64(&s.v_, limbs);
    return s;
}

Scalar Scalar::decode(ByteView in) {
    require_size(in, kEncodedSize, "scalar");
    blst_scalar raw;
    blst_scalar_from_bendian(&raw, in.data());
    if (!blst_scalar_fr_check(&raw)) throw Error(Errc::malformed_encoding, "scalar not reduced mod p");
    Scalar s;
    blst_fr_from_scalar(&s.v_, &raw);
    return s;
}

std::array<std::uint8_t, Scalar::kEncodedSize> Scalar::encode() const noexcept {
    blst_scalar raw;
    blst_scalar_from_fr(&raw, &v_);
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_bendian_from_scalar(out.data(), &raw);
    return out;
}

bool Scalar::is_zero() const noexcept {
    static const blst_fr zero{};
    return std::memcmp(&v_, &zero, sizeof v_) == 0;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error(Errc::invalid_input, "zero has no inverse");
    ++ops::current().scalar_inv;
    Scalar s;
    blst_fr_eucl_inverse(&s.v_, &v_);
    return s;
}

Scalar operator+(const Scalar& a, const Scalar& b) noexcept {
    Scalar s;
    blst_fr_add(&s.v_, &a.v_, &b.v_);
    return s;
}

Scalar operator-(const Scalar& a, const Scalar& b) noexcept {
    Scalar s;
    blst_fr_sub(&s.v_, &a.v_, &b.v_);
    return s;
}

Scalar operator*(const Scalar& a, const Scalar& b) noexcept {
    ++ops::current().scalar_mul;
    Scalar s;
    blst_fr_mul(&s.v_, &a.v_, &b.v_);
    return s;
}

Scalar Scalar::operator-() const noexcept {
    Scalar s;
    blst_fr_cneg(&s.v_, &v_, true);
    return s;
}

bool operator==(const Scalar& a, const Scalar& b) noexcept {
    return std::memcmp(&a.v_, &b.v_, sizeof a.v_) == 0;
}

blst_scalar Scalar::little_endian() const noexcept {
    blst_scalar raw;
    blst_scalar_from_fr(&raw, &v_);
    return raw;
}

// Reduces an arbitrary-length big-endian string mod p.
Scalar scalar_from_wide(ByteView in) noexcept {
    blst_scalar raw;
    blst_scalar_from_be_bytes(&raw, in.data(), in.size());
    Scalar s;
    blst_fr_from_scalar(&s.v_, &raw);
    return s;
}

// --- G1 ---------------------------------------------------------------------

G1::G1() noexcept { std::memset(&p_, 0, sizeof p_); }

G1 G1::generator() noexcept {
    G1 g;
    g.p_ = *blst_p1_generator();
    return g;
}

G1 G1::decode(ByteView in) {
    require_size(in, kEncodedSize, "G1 element");
    blst_p1_affine aff;
    if (blst_p1_uncompress(&aff, in.data()) != BLST_SUCCESS)
        throw Error(Errc::malformed_encoding, "G1 element not on curve");
    if (!blst_p1_affine_in_g1(&aff)) throw Error(Errc::malformed_encoding, "G1 element outside subgroup");
    G1 g;
    blst_p1_from_affine(&g.p_, &aff);
    return g;
}

std::array<std::uint8_t, G1::kEncodedSize> G1::encode() const noexcept {
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_p1_compress(out.data(), &p_);
    return out;
}

bool G1::is_identity() const noexcept { return blst_p1_is_inf(&p_); }

G1 G1::pow(const Scalar& e) const noexcept {
    ++ops::current().g1_exp;
    auto raw = e.little_endian();
    G1 r;
    blst_p1_mult(&r.p_, &p_, raw.b, kScalarBits);
    return r;
}

G1 operator*(const G1& a, const G1& b) noexcept {
    G1 r;
    blst_p1_add_or_double(&r.p_, &a.p_, &b.p_);
    return r;
}

bool operator==(const G1& a, const G1& b) noexcept { return blst_p1_is_equal(&a.p_, &b.p_); }

// --- G2 ---------------------------------------------------------------------

G2::G2() noexcept { std::memset(&p_, 0, sizeof p_); }

G2 G2::generator() noexcept {
    G2 g;
    g.p_ = *blst_p2_generator();
    return g;
}

G2 G2::decode(ByteView in) {
    require_size(in, kEncodedSize, "G2 element");
    blst_p2_affine aff;
    if (blst_p2_uncompress(&aff, in.data()) != BLST_SUCCESS)
        throw Error(Errc::malformed_encoding, "G2 element not on curve");
    if (!blst_p2_affine_in_g2(&aff)) throw Error(Errc::malformed_encoding, "G2 element outside subgroup");
    G2 g;
    blst_p2_from_affine(&g.p_, &aff);
    return g;
}

std::array<std::uint8_t, G2::kEncodedSize> G2::encode() const noexcept {
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_p2_compress(out.data(), &p_);
    return out;
}

bool G2::is_identity() const noexcept { return blst_p2_is_inf(&p_); }

G2 G2::pow(const Scalar& e) const noexcept {
    ++ops::current().g2_exp;
    auto raw = e.little_endian();
    G2 r;
    blst_p2_mult(&r.p_, &p_, raw.b, kScalarBits);
    return r;
}

G2 operator*(const G2& a, const G2& b) noexcept {
    G2 r;
    blst_p2_add_or_double(&r.p_, &a.p_, &b.p_);
    return r;
}

bool operator==(const G2& a, const G2& b) noexcept { return blst_p2_is_equal(&a.p_, &b.p_); }

// --- GT ---------------------------------------------------------------------

GT::GT() noexcept : f_(*blst_fp12_one()) {}

GT GT::decode(ByteView in) {
    require_size(in, kEncodedSize, "GT element");
    // Same coefficient order as blst_bendian_from_fp12.
    GT g;
    const std::uint8_t* p = in.data();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                blst_fp_from_bendian(&g.f_.fp6[j].fp2[i].fp[k], p);
                p += 48;
            }
        }
    }
    // Non-canonical (>= field modulus) coordinates do not survive the round trip.
    auto again = g.encode();
    if (std::memcmp(again.data(), in.data(), kEncodedSize) != 0)
        throw Error(Errc::malformed_encoding, "GT coordinate not reduced");
    if (!blst_fp12_in_group(&g.f_)) throw Error(Errc::malformed_encoding, "GT element outside subgroup");
    return g;
}

std::array<std::uint8_t, GT::kEncodedSize> GT::encode() const noexcept {
    std::array<std::uint8_t, kEncodedSize> out{};
    blst_bendian_from_fp12(out.data(), &f_);
    return out;
}

bool GT::is_identity() const noexcept { return blst_fp12_is_one(&f_); }

GT GT::pow(const Scalar& e) const noexcept {
    ++ops::current().gt_exp;
    // Left-to-right square and multiply. GT lies in the cyclotomic subgroup,
    // so the cheaper cyclotomic squaring applies.
    auto raw = e.little_endian();
    GT r;
    bool started = false;
    for (int bit = static_cast<int>(kScalarBits); bit >= 0; --bit) {
        if (started) blst_fp12_cyclotomic_sqr(&r.f_, &r.f_);
        if ((raw.b[bit / 8] >> (bit % 8)) & 1) {
            if (started) {
                blst_fp12_mul(&r.f_, &r.f_, &f_);
            } else {
                r.f_ = f_;
                started = true;
            }
        }
    }
    return r;
}

GT operator*(const GT& a, const GT& b) noexcept {
    GT r;
    blst_fp12_mul(&r.f_, &a.f_, &b.f_);
    return r;
}

bool operator==(const GT& a, const GT& b) noexcept { return blst_fp12_is_equal(&a.f_, &b.f_); }

// --- pairing and sampling -----------------------------------------------------

GT pairing(const G1& a, const G2& b) noexcept {
    ++ops::current().pairing;
    GT r;
    if (a.is_identity() || b.is_identity()) return r;
    blst_p1_affine pa;
    blst_p2_affine qa;
    blst_p1_to_affine(&pa, &a.p_);
    blst_p2_to_affine(&qa, &b.p_);
    blst_fp12 ml;
    blst_miller_loop(&ml, &qa, &pa);
    blst_final_exp(&r.f_, &ml);
    return r;
}

Scalar hash_to_scalar(std::string_view identity) {
    if (identity.empty()) throw Error(Errc::invalid_input, "identity must be nonempty");
    static constexpr std::string_view kDomain = "gac/hash-to-scalar/v1";
    for (std::uint32_t counter = 0;; ++counter) {
        ByteWriter msg;
        msg.raw(as_bytes(kDomain));
        msg.u64(identity.size());
        msg.raw(as_bytes(identity));
        msg.u32(counter);
        std::uint8_t digest[64];
        unsigned int len = 0;
        EVP_Digest(msg.bytes().data(), msg.bytes().size(), digest, &len, EVP_sha512(), nullptr);
        auto s = scalar_from_wide(digest);
        if (!s.is_zero()) return s;
    }
}

Scalar rand_scalar(Rng& rng) {
    // 512 bits reduced mod a 255-bit prime: statistically uniform.
    for (;;) {
        std::array<std::uint8_t, 64> wide{};
        rng.fill(wide);
        auto s = scalar_from_wide(wide);
        if (!s.is_zero()) return s;
    }
}

// Hash-to-curve of fresh random bytes: uniform over the group, and no
// exponentiation is spent on sampling.
G1 rand_g1(Rng& rng) {
    static constexpr std::string_view dst = "GAC-RAND-G1_XMD:SHA-256_SSWU_RO_";
    G1 out;
    do {
        std::array<std::uint8_t, 64> seed{};
        rng.fill(seed);
        blst_hash_to_g1(&out.p_, seed.data(), seed.size(), reinterpret_cast<const byte*>(dst.data()), dst.size(),
                        nullptr, 0);
    } while (out.is_identity());
    return out;
}

G2 rand_g2(Rng& rng) {
    static constexpr std::string_view dst = "GAC-RAND-G2_XMD:SHA-256_SSWU_RO_";
    G2 out;
    do {
        std::array<std::uint8_t, 64> seed{};
        rng.fill(seed);
        blst_hash_to_g2(&out.p_, seed.data(), seed.size(), reinterpret_cast<const byte*>(dst.data()), dst.size(),
                        nullptr, 0);
    } while (out.is_identity());
    return out;
}

CurveParams curve_params() noexcept {
    return {"BLS12-381", 128, Scalar::kEncodedSize, G1::kEncodedSize, G2::kEncodedSize, GT::kEncodedSize};
}

}  // namespace gac
