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

// Identity-based broadcast encryption with constant-size ciphertexts, in
// two trust modes:
//
//  * public-key mode: the broadcaster only knows PK, so C2 is assembled
//    from the powers h^{gamma^i} and the elementary symmetric polynomials of
//    the member hashes (quadratic in |S|);
//  * master-secret mode: the caller holds gamma and computes the exponent
//    prod(gamma + H(u)) directly (linear in |S|), which also enables
//    constant-cost add, remove and rekey through the auxiliary C3 = h^{prod}.
//
// Decryption is the same in both modes and quadratic in |S|.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gac/bytes.hpp"
#include "gac/pairing.hpp"
#include "gac/rng.hpp"

namespace gac::ibbe {

using Members = std::span<const std::string>;

/// MSK = (g, gamma). Kept out of every serialized format except the sealed
/// blob produced by the trust boundary (see sealing.hpp).
struct MasterSecretKey {
    G1 g;
    Scalar gamma;
};

/// PK = (w = g^gamma, v = e(g, h), h, h^gamma, ..., h^{gamma^m}).
struct PublicKey {
    G1 w;
    GT v;
    std::vector<G2> h_powers;

    /// Largest member set a ciphertext may address.
    [[nodiscard]] std::size_t capacity() const noexcept { return h_powers.empty() ? 0 : h_powers.size() - 1; }
    [[nodiscard]] const G2& h() const { return h_powers.at(0); }

    [[nodiscard]] Bytes serialize() const;
    static PublicKey deserialize(ByteView in);
};

struct SystemKeys {
    MasterSecretKey msk;
    PublicKey pk;
};

/// U_SK = g^{1/(gamma + H(u))}.
struct UserSecretKey {
    std::string identity;
    G1 sk;

    [[nodiscard]] Bytes serialize() const;
    static UserSecretKey deserialize(ByteView in);
    friend bool operator==(const UserSecretKey&, const UserSecretKey&) = default;
};

/// (C1, C2, C3) = (w^{-k}, h^{k prod}, h^{prod}), prod = prod_{u in S}(gamma + H(u)).
struct BroadcastCiphertext {
    static constexpr std::size_t kEncodedSize = 1 + G1::kEncodedSize + 2 * G2::kEncodedSize;

    G1 c1;
    G2 c2;
    G2 c3;

    [[nodiscard]] Bytes serialize() const;
    static BroadcastCiphertext deserialize(ByteView in);
    friend bool operator==(const BroadcastCiphertext&, const BroadcastCiphertext&) = default;
};

/// b_k = v^k.
struct BroadcastKey {
    GT bk;
    friend bool operator==(const BroadcastKey&, const BroadcastKey&) = default;
};

struct Encryption {
    BroadcastKey key;
    BroadcastCiphertext ct;
};

/// capacity >= 1; costs exactly `capacity` G2 exponentiations for the powers.
SystemKeys setup(std::size_t capacity, Rng& rng);

/// Throws Error(degenerate_identity) if gamma + H(u) = 0.
UserSecretKey extract_user_key(const MasterSecretKey& msk, std::string_view identity);

/// e(sk, h^gamma * h^{H(u)}) == v.
bool user_key_valid(const PublicKey& pk, const UserSecretKey& usk);

/// E_1 .. E_n of the values, via the incremental O(n^2) recurrence.
std::vector<Scalar> elementary_symmetric(std::span<const Scalar> values);

Encryption encrypt_pk(const PublicKey& pk, Members members, Rng& rng);
Encryption encrypt_msk(const MasterSecretKey& msk, const PublicKey& pk, Members members, Rng& rng);

/// Throws Error(not_a_member) when usk.identity is not in members.
BroadcastKey decrypt(const UserSecretKey& usk, Members members, const BroadcastCiphertext& ct,
                     const PublicKey& pk);

/// Folds u_add into C2 and C3; the broadcast key is unchanged.
BroadcastCiphertext add_user_msk(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                                 Members members, std::string_view u_add);

/// Public-key baseline for add: a full re-encryption over S + {u_add}.
Encryption add_user_pk(const PublicKey& pk, Members members, std::string_view u_add, Rng& rng);

/// Divides u_rem out of C3 and draws a fresh broadcast key.
Encryption remove_user_msk(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                           Members members, std::string_view u_rem, Rng& rng);

/// Fresh broadcast key for an unchanged member set. Needs only PK and C3.
Encryption rekey(const BroadcastCiphertext& ct, const PublicKey& pk, Rng& rng);

namespace detail {
// Raw MSK codec; only the sealing layer may call these.
Bytes encode_master_key(const MasterSecretKey& msk);
MasterSecretKey decode_master_key(ByteView in);
}  // namespace detail

}  // namespace gac::ibbe
