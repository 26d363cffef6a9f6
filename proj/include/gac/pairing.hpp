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

// Curve-agnostic view of a Type-3 pairing: three prime-order groups, the
// scalar field Z_p, identity hashing and fixed-width serialization. The
// backend is BLS12-381 via blst; nothing above this header touches blst.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include <blst.h>

#include "gac/bytes.hpp"
#include "gac/rng.hpp"

namespace gac {

class G1;
class G2;
class GT;

/// Element of Z_p (p = prime order of the pairing groups). Values produced
/// by rand_scalar() and hash_to_scalar() are never zero; arithmetic results
/// may be, and callers that need a unit check is_zero().
class Scalar {
  public:
    static constexpr std::size_t kEncodedSize = 32;

    Scalar() noexcept;  // zero
    static Scalar from_u64(std::uint64_t v) noexcept;
    static Scalar one() noexcept { return from_u64(1); }
    /// Canonical big-endian decoding; rejects values >= p.
    static Scalar decode(ByteView in);

    [[nodiscard]] std::array<std::uint8_t, kEncodedSize> encode() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;
    /// Multiplicative inverse; throws Error(invalid_input) on zero.
    [[nodiscard]] Scalar inverse() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b) noexcept;
    friend Scalar operator-(const Scalar& a, const Scalar& b) noexcept;
    friend Scalar operator*(const Scalar& a, const Scalar& b) noexcept;
    Scalar operator-() const noexcept;
    Scalar& operator+=(const Scalar& o) noexcept { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) noexcept { return *this = *this * o; }
    friend bool operator==(const Scalar& a, const Scalar& b) noexcept;

  private:
    friend class G1;
    friend class G2;
    friend class GT;
    friend Scalar scalar_from_wide(ByteView) noexcept;
    [[nodiscard]] blst_scalar little_endian() const noexcept;

    blst_fr v_;
};

class G1 {
  public:
    static constexpr std::size_t kEncodedSize = 48;

    G1() noexcept;  // identity
    static G1 generator() noexcept;
    /// Compressed decoding with on-curve and subgroup checks.
    static G1 decode(ByteView in);

    [[nodiscard]] std::array<std::uint8_t, kEncodedSize> encode() const noexcept;
    [[nodiscard]] bool is_identity() const noexcept;

    /// Exponentiation (written multiplicatively, as the scheme is).
    [[nodiscard]] G1 pow(const Scalar& e) const noexcept;
    friend G1 operator*(const G1& a, const G1& b) noexcept;
    friend bool operator==(const G1& a, const G1& b) noexcept;

  private:
    friend class GT;
    friend GT pairing(const G1&, const G2&) noexcept;
    friend G1 rand_g1(Rng&);
    blst_p1 p_;
};

class G2 {
  public:
    static constexpr std::size_t kEncodedSize = 96;

    G2() noexcept;  // identity
    static G2 generator() noexcept;
    static G2 decode(ByteView in);

    [[nodiscard]] std::array<std::uint8_t, kEncodedSize> encode() const noexcept;
    [[nodiscard]] bool is_identity() const noexcept;

    [[nodiscard]] G2 pow(const Scalar& e) const noexcept;
    friend G2 operator*(const G2& a, const G2& b) noexcept;
    friend bool operator==(const G2& a, const G2& b) noexcept;

  private:
    friend GT pairing(const G1&, const G2&) noexcept;
    friend G2 rand_g2(Rng&);
    blst_p2 p_;
};

/// Target group, a multiplicative subgroup of F_{p^12}.
class GT {
  public:
    static constexpr std::size_t kEncodedSize = 576;

    GT() noexcept;  // identity
    static GT decode(ByteView in);

    [[nodiscard]] std::array<std::uint8_t, kEncodedSize> encode() const noexcept;
    [[nodiscard]] bool is_identity() const noexcept;

    [[nodiscard]] GT pow(const Scalar& e) const noexcept;
    friend GT operator*(const GT& a, const GT& b) noexcept;
    friend bool operator==(const GT& a, const GT& b) noexcept;

  private:
    friend GT pairing(const G1&, const G2&) noexcept;
    blst_fp12 f_;
};

/// Optimal ate pairing e : G1 x G2 -> GT.
GT pairing(const G1& a, const G2& b) noexcept;

/// Deterministic map from a nonempty identity string into Z_p^*: SHA-512 of
/// (domain tag, identity, retry counter) reduced mod p, retried on zero.
Scalar hash_to_scalar(std::string_view identity);

Scalar rand_scalar(Rng& rng);
G1 rand_g1(Rng& rng);
G2 rand_g2(Rng& rng);

struct CurveParams {
    std::string_view curve;
    unsigned security_bits;
    std::size_t scalar_bytes;
    std::size_t g1_bytes;
    std::size_t g2_bytes;
    std::size_t gt_bytes;
};

CurveParams curve_params() noexcept;

}  // namespace gac
