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

#include "gac/rng.hpp"

#include <array>
#include <cstring>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include "gac/errors.hpp"

namespace gac {

struct Rng::Impl {
    // Null for the system source.
    EVP_CIPHER_CTX* ctr = nullptr;
    std::array<std::uint8_t, 4096> buf{};
    std::size_t pos = buf.size();

    ~Impl() {
        if (ctr) EVP_CIPHER_CTX_free(ctr);
    }

    void refill() {
        std::array<std::uint8_t, 4096> zeros{};
        int len = 0;
        if (EVP_EncryptUpdate(ctr, buf.data(), &len, zeros.data(), static_cast<int>(zeros.size())) != 1 ||
            len != static_cast<int>(buf.size()))
            throw Error(Errc::io_error, "keystream generation failed");
        pos = 0;
    }
};

Rng::Rng(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

Rng Rng::system() { return Rng(std::make_unique<Impl>()); }

Rng Rng::seeded(std::uint64_t seed) {
    auto impl = std::make_unique<Impl>();
    std::array<std::uint8_t, 24> material{};
    static constexpr char kTag[] = "gac/rng/v1";
    std::memcpy(material.data(), kTag, sizeof(kTag) - 1);
    for (int i = 0; i < 8; ++i) material[16 + i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
    std::array<std::uint8_t, SHA256_DIGEST_LENGTH> key{};
    SHA256(material.data(), material.size(), key.data());
    std::array<std::uint8_t, 16> iv{};
    impl->ctr = EVP_CIPHER_CTX_new();
    if (!impl->ctr || EVP_EncryptInit_ex(impl->ctr, EVP_aes_256_ctr(), nullptr, key.data(), iv.data()) != 1)
        throw Error(Errc::io_error, "cannot initialise seeded generator");
    return Rng(std::move(impl));
}

bool Rng::deterministic() const noexcept { return impl_->ctr != nullptr; }

void Rng::fill(std::span<std::uint8_t> out) {
    if (!impl_->ctr) {
        if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
            throw Error(Errc::io_error, "system randomness unavailable");
        return;
    }
    std::size_t done = 0;
    while (done < out.size()) {
        if (impl_->pos == impl_->buf.size()) impl_->refill();
        std::size_t n = std::min(out.size() - done, impl_->buf.size() - impl_->pos);
        std::memcpy(out.data() + done, impl_->buf.data() + impl_->pos, n);
        impl_->pos += n;
        done += n;
    }
}

std::uint64_t Rng::next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = v << 8 | x;
    return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    if (bound == 0) throw Error(Errc::invalid_input, "uniform bound must be nonzero");
    // Rejection sampling keeps the result exactly uniform.
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
        auto v = next_u64();
        if (v < limit) return v % bound;
    }
}

}  // namespace gac
