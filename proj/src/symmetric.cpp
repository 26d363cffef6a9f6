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

#include "gac/symmetric.hpp"

#include <memory>

#include <openssl/evp.h>

#include "gac/errors.hpp"
#include "gac/op_counter.hpp"

namespace gac {

Digest256 sha256(ByteView data) {
    Digest256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::io_error, "sha256 failed");
    return out;
}

GroupKey GroupKey::random(Rng& rng) {
    GroupKey gk;
    rng.fill(gk.bytes);
    return gk;
}

namespace aead {

namespace {
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CtxPtr make_ctx() {
    CtxPtr ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
    if (!ctx) throw Error(Errc::io_error, "cipher context allocation failed");
    return ctx;
}
}  // namespace

Bytes seal(const Key256& key, ByteView plaintext, ByteView associated_data, Rng& rng) {
    ++ops::current().aead_seal;
    Bytes blob(kOverhead + plaintext.size());
    rng.fill(std::span(blob).first(kNonceSize));

    auto ctx = make_ctx();
    int len = 0;
    bool ok = EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
              EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) == 1 &&
              EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), blob.data()) == 1;
    if (ok && !associated_data.empty())
        ok = EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                               static_cast<int>(associated_data.size())) == 1;
    if (ok && !plaintext.empty())
        ok = EVP_EncryptUpdate(ctx.get(), blob.data() + kOverhead, &len, plaintext.data(),
                               static_cast<int>(plaintext.size())) == 1;
    ok = ok && EVP_EncryptFinal_ex(ctx.get(), blob.data() + kOverhead + plaintext.size(), &len) == 1 &&
         EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize, blob.data() + kNonceSize) == 1;
    if (!ok) throw Error(Errc::io_error, "AES-GCM encryption failed");
    return blob;
}

Bytes open(const Key256& key, ByteView blob, ByteView associated_data) {
    ++ops::current().aead_open;
    if (blob.size() < kOverhead) throw Error(Errc::authentication_failed, "envelope too short");
    auto body = blob.subspan(kOverhead);
    Bytes plain(body.size());
    Bytes tag(blob.begin() + kNonceSize, blob.begin() + kOverhead);

    auto ctx = make_ctx();
    int len = 0;
    bool ok = EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
              EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) == 1 &&
              EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), blob.data()) == 1;
    if (ok && !associated_data.empty())
        ok = EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                               static_cast<int>(associated_data.size())) == 1;
    if (ok && !body.empty())
        ok = EVP_DecryptUpdate(ctx.get(), plain.data(), &len, body.data(), static_cast<int>(body.size())) == 1;
    ok = ok && EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) == 1 &&
         EVP_DecryptFinal_ex(ctx.get(), plain.data() + plain.size(), &len) == 1;
    if (!ok) throw Error(Errc::authentication_failed, "envelope authentication failed");
    return plain;
}

ByteView nonce_of(ByteView blob) {
    if (blob.size() < kNonceSize) throw Error(Errc::malformed_encoding, "envelope too short");
    return blob.first(kNonceSize);
}

}  // namespace aead

}  // namespace gac
