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

#include "gac/he_baseline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "gac/errors.hpp"
#include "gac/op_counter.hpp"

namespace gac::he {

namespace {

constexpr std::string_view kRecordMagic = "GACH";
constexpr std::uint8_t kFormatVersion = 1;

struct PkeyFree {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxFree {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyFree>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree>;

PkeyPtr private_key(const RawKey& raw) {
    PkeyPtr k(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
    if (!k) throw Error(Errc::invalid_input, "bad X25519 private key");
    return k;
}

PkeyPtr public_key(const RawKey& raw) {
    PkeyPtr k(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
    if (!k) throw Error(Errc::invalid_input, "bad X25519 public key");
    return k;
}

RawKey public_of(const RawKey& priv) {
    auto k = private_key(priv);
    RawKey out{};
    std::size_t len = out.size();
    if (EVP_PKEY_get_raw_public_key(k.get(), out.data(), &len) != 1 || len != out.size())
        throw Error(Errc::invalid_input, "cannot derive X25519 public key");
    return out;
}

// Fails on the all-zero shared secret (small-order peer key).
RawKey shared_secret(const RawKey& priv, const RawKey& peer_pub) {
    auto self = private_key(priv);
    auto peer = public_key(peer_pub);
    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(self.get(), nullptr));
    RawKey out{};
    std::size_t len = out.size();
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 || EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1 ||
        EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != out.size())
        throw Error(Errc::authentication_failed, "X25519 key agreement failed");
    return out;
}

Key256 kdf(const RawKey& shared, const RawKey& eph_pub, const RawKey& recipient_pub) {
    constexpr std::string_view tag = "gac/he/v1";
    std::array<std::uint8_t, tag.size() + 3 * 32> in{};
    auto it = std::copy(tag.begin(), tag.end(), in.begin());
    it = std::copy(shared.begin(), shared.end(), it);
    it = std::copy(eph_pub.begin(), eph_pub.end(), it);
    std::copy(recipient_pub.begin(), recipient_pub.end(), it);
    return sha256(in);
}

Bytes entry_aad(std::string_view group_id, std::string_view identity) {
    ByteWriter w;
    w.str("gac/he/entry");
    w.str(group_id);
    w.str(identity);
    return std::move(w).take();
}

std::string gk_label(std::string_view group_id) { return "he-group-key:" + std::string(group_id); }

RawKey to_raw(const Bytes& b, std::string_view what) {
    if (b.size() != 32) throw Error(Errc::malformed_encoding, std::string(what) + " must be 32 bytes");
    RawKey out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

GroupKey to_group_key(const Bytes& b) {
    if (b.size() != 32) throw Error(Errc::malformed_encoding, "wrapped group key has wrong size");
    GroupKey gk;
    std::copy(b.begin(), b.end(), gk.bytes.begin());
    return gk;
}

}  // namespace

MemberKeyPair generate_keypair(std::string identity, Rng& rng) {
    if (identity.empty()) throw Error(Errc::invalid_input, "empty identity");
    MemberKeyPair kp;
    kp.identity = std::move(identity);
    rng.fill(kp.private_key);
    kp.public_key = public_of(kp.private_key);
    return kp;
}

// --- KeyDirectory ----------------------------------------------------------------

void KeyDirectory::insert(MemberKeyPair kp) {
    auto id = kp.identity;
    keys_.insert_or_assign(std::move(id), std::move(kp));
}

void KeyDirectory::ensure(std::span<const std::string> identities, Rng& rng) {
    for (const auto& id : identities)
        if (!contains(id)) insert(generate_keypair(id, rng));
}

bool KeyDirectory::contains(std::string_view identity) const { return keys_.find(identity) != keys_.end(); }

const MemberKeyPair& KeyDirectory::at(std::string_view identity) const {
    auto it = keys_.find(identity);
    if (it == keys_.end()) throw Error(Errc::key_lookup, "no key for '" + std::string(identity) + "'");
    return it->second;
}

KeyDirectory KeyDirectory::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read key directory " + path.string());
    KeyDirectory dir;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
        MemberKeyPair kp;
        kp.identity = line.substr(0, t1);
        try {
            kp.public_key = to_raw(from_hex(line.substr(t1 + 1, t2 - t1 - 1)), "public key");
            kp.private_key = to_raw(from_hex(line.substr(t2 + 1)), "private key");
        } catch (const Error& e) {
            throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (kp.identity.empty() || public_of(kp.private_key) != kp.public_key)
            throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": inconsistent keypair");
        dir.insert(std::move(kp));
    }
    return dir;
}

void KeyDirectory::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write key directory " + path.string());
    out << "# identity\tpublic\tprivate\n";
    for (const auto& [id, kp] : keys_)
        out << id << '\t' << to_hex(kp.public_key) << '\t' << to_hex(kp.private_key) << '\n';
    if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

// --- wrap / unwrap ---------------------------------------------------------------

Bytes wrap(const RawKey& recipient_public, const GroupKey& gk, ByteView aad, Rng& rng) {
    ++ops::current().he_wrap;
    RawKey eph{};
    rng.fill(eph);
    auto eph_pub = public_of(eph);
    auto key = kdf(shared_secret(eph, recipient_public), eph_pub, recipient_public);
    ByteWriter w;
    w.raw(eph_pub);
    w.raw(aead::seal(key, gk.bytes, aad, rng));
    return std::move(w).take();
}

GroupKey unwrap(const MemberKeyPair& recipient, ByteView blob, ByteView aad) {
    ++ops::current().he_unwrap;
    if (blob.size() != kWrappedSize) throw Error(Errc::authentication_failed, "wrapped key has wrong size");
    RawKey eph_pub{};
    std::copy_n(blob.begin(), eph_pub.size(), eph_pub.begin());
    auto key = kdf(shared_secret(recipient.private_key, eph_pub), eph_pub, recipient.public_key);
    return to_group_key(aead::open(key, blob.subspan(eph_pub.size()), aad));
}

// --- metadata -------------------------------------------------------------------

const HEEntry* HEGroupMetadata::find(std::string_view identity) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const HEEntry& e) { return e.identity == identity; });
    return it == entries.end() ? nullptr : &*it;
}

Bytes HEGroupMetadata::serialize() const {
    ByteWriter w;
    w.raw(as_bytes(kRecordMagic));
    w.u8(kFormatVersion);
    w.str(group_id);
    w.u64(version);
    w.blob(sealed_gk.data);
    w.u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) {
        w.str(e.identity);
        w.raw(e.wrapped_gk);
    }
    return std::move(w).take();
}

HEGroupMetadata HEGroupMetadata::deserialize(ByteView in) {
    ByteReader r(in);
    auto magic = r.raw(kRecordMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kRecordMagic.begin()))
        throw Error(Errc::malformed_encoding, "not an HE group record");
    if (r.u8() != kFormatVersion) throw Error(Errc::malformed_encoding, "unsupported HE record version");
    HEGroupMetadata meta;
    meta.group_id = r.str();
    meta.version = r.u64();
    meta.sealed_gk.data = r.blob();
    auto n = r.u32();
    meta.entries.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        HEEntry e;
        e.identity = r.str();
        auto raw = r.raw(kWrappedSize);
        e.wrapped_gk.assign(raw.begin(), raw.end());
        meta.entries.push_back(std::move(e));
    }
    r.expect_end();
    return meta;
}

// --- HEAdmin ----------------------------------------------------------------------

HEEntry HEAdmin::wrap_for(std::string_view group_id, std::string_view user, const GroupKey& gk, Rng& rng) const {
    const auto& kp = dir_->at(user);
    return {std::string(user), wrap(kp.public_key, gk, entry_aad(group_id, user), rng)};
}

HEGroupMetadata HEAdmin::create_group(std::string group_id, std::span<const std::string> members, Rng& rng) const {
    if (group_id.empty()) throw Error(Errc::invalid_input, "empty group id");
    if (members.empty()) throw Error(Errc::invalid_input, "a group needs at least one member");
    std::unordered_set<std::string_view> seen;
    for (const auto& m : members) {
        if (m.empty()) throw Error(Errc::invalid_input, "empty identity");
        if (!seen.insert(m).second) throw Error(Errc::invalid_input, "duplicate identity '" + m + "'");
        (void)dir_->at(m);
    }
    HEGroupMetadata meta;
    meta.group_id = std::move(group_id);
    meta.version = 1;
    auto gk = GroupKey::random(rng);
    meta.entries.reserve(members.size());
    for (const auto& m : members) meta.entries.push_back(wrap_for(meta.group_id, m, gk, rng));
    meta.sealed_gk = {sealer_.seal(gk.bytes, gk_label(meta.group_id), rng)};
    return meta;
}

HEGroupMetadata HEAdmin::add_user(const HEGroupMetadata& meta, std::string_view user, Rng& rng) const {
    if (user.empty()) throw Error(Errc::invalid_input, "empty identity");
    if (meta.find(user)) throw Error(Errc::invalid_input, "'" + std::string(user) + "' is already a member");
    Bytes raw;
    try {
        raw = sealer_.unseal(meta.sealed_gk.data, gk_label(meta.group_id));
    } catch (const Error& e) {
        throw Error(Errc::trust_boundary, std::string("cannot unseal group key: ") + e.what());
    }
    HEGroupMetadata next = meta;
    next.entries.push_back(wrap_for(next.group_id, user, to_group_key(raw), rng));
    ++next.version;
    return next;
}

HEGroupMetadata HEAdmin::remove_user(const HEGroupMetadata& meta, std::string_view user, Rng& rng) const {
    if (!meta.find(user)) throw Error(Errc::invalid_input, "'" + std::string(user) + "' is not a member");
    HEGroupMetadata next;
    next.group_id = meta.group_id;
    next.version = meta.version + 1;
    auto gk = GroupKey::random(rng);
    next.entries.reserve(meta.entries.size() - 1);
    for (const auto& e : meta.entries)
        if (e.identity != user) next.entries.push_back(wrap_for(next.group_id, e.identity, gk, rng));
    next.sealed_gk = {sealer_.seal(gk.bytes, gk_label(next.group_id), rng)};
    return next;
}

GroupKey client_decrypt(const MemberKeyPair& keys, const HEGroupMetadata& meta) {
    const auto* e = meta.find(keys.identity);
    if (!e) throw Error(Errc::not_a_member, "'" + keys.identity + "' is not a member of " + meta.group_id);
    try {
        return unwrap(keys, e->wrapped_gk, entry_aad(meta.group_id, keys.identity));
    } catch (const Error& err) {
        if (err.code() != Errc::authentication_failed) throw;
        throw Error(Errc::stale_metadata, "entry for '" + keys.identity + "' does not open");
    }
}

void store_group(MetadataStore& store, const HEGroupMetadata& meta) {
    store.put(MetadataStore::group_record_path(meta.group_id), meta.serialize());
}

HEGroupMetadata load_group(const MetadataStore& store, std::string_view group_id) {
    return HEGroupMetadata::deserialize(store.get(MetadataStore::group_record_path(group_id)).payload);
}

}  // namespace gac::he
