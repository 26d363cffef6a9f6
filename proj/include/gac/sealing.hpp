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

// Simulated enclave sealing. Secrets that must persist outside the trust
// boundary (the master secret key, each group's gk) are encrypted under a
// sealing key that only the boundary holds; here that key comes from a
// local secret file instead of the CPU.

#include <filesystem>
#include <string_view>

#include "gac/bytes.hpp"
#include "gac/rng.hpp"
#include "gac/symmetric.hpp"

namespace gac {

class Sealer {
  public:
    explicit Sealer(const Key256& key) : key_(key) {}

    /// Reads a 64-hex-digit key file.
    static Sealer from_file(const std::filesystem::path& path);
    /// Writes a fresh key file (mode 0600) and returns the sealer for it.
    static Sealer create_file(const std::filesystem::path& path, Rng& rng);

    /// `label` binds the blob to its purpose; unseal must pass the same one.
    [[nodiscard]] Bytes seal(ByteView secret, std::string_view label, Rng& rng) const;
    /// Throws Error(authentication_failed) on a wrong key, label or tampered blob.
    [[nodiscard]] Bytes unseal(ByteView blob, std::string_view label) const;

  private:
    Key256 key_;
};

}  // namespace gac
