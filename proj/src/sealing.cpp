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

#include "gac/sealing.hpp"

#include <fstream>
#include <sstream>

#include "gac/errors.hpp"

namespace gac {

namespace {
Bytes label_aad(std::string_view label) {
    ByteWriter w;
    w.str("gac/seal/v1");
    w.str(label);
    return std::move(w).take();
}
}  // namespace

Sealer Sealer::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read sealing key " + path.string());
    std::string hex;
    in >> hex;
    auto raw = from_hex(hex);
    if (raw.size() != 32) throw Error(Errc::malformed_encoding, "sealing key must be 32 bytes");
    Key256 key{};
    std::copy(raw.begin(), raw.end(), key.begin());
    return Sealer(key);
}

Sealer Sealer::create_file(const std::filesystem::path& path, Rng& rng) {
    Key256 key{};
    rng.fill(key);
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write sealing key " + path.string());
        out << to_hex(key) << '\n';
    }
    std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
    return Sealer(key);
}

Bytes Sealer::seal(ByteView secret, std::string_view label, Rng& rng) const {
    return aead::seal(key_, secret, label_aad(label), rng);
}

Bytes Sealer::unseal(ByteView blob, std::string_view label) const {
    return aead::open(key_, blob, label_aad(label));
}

}  // namespace gac
