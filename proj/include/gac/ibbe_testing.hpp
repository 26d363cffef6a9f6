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

// Injected-randomness entry points for oracle tests. Each takes the
// ephemeral exponent k explicitly instead of drawing it from an Rng, so
// independent constructions can be compared byte for byte.

#include "gac/ibbe.hpp"

namespace gac::ibbe::testing {

Encryption encrypt_pk_with(const PublicKey& pk, Members members, const Scalar& k);
Encryption encrypt_msk_with(const MasterSecretKey& msk, const PublicKey& pk, Members members, const Scalar& k);
Encryption remove_user_msk_with(const MasterSecretKey& msk, const PublicKey& pk, const BroadcastCiphertext& ct,
                                Members members, std::string_view u_rem, const Scalar& k);
Encryption rekey_with(const BroadcastCiphertext& ct, const PublicKey& pk, const Scalar& k);

/// decrypt() without the membership check, for negative-path tests.
BroadcastKey decrypt_unchecked(const UserSecretKey& usk, Members members, const BroadcastCiphertext& ct,
                               const PublicKey& pk);

}  // namespace gac::ibbe::testing
