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

#include "gac/bytes.hpp"

#include "gac/errors.hpp"

namespace gac {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_input: return "invalid-input";
        case Errc::invalid_capacity: return "invalid-capacity";
        case Errc::capacity_exceeded: return "capacity-exceeded";
        case Errc::degenerate_identity: return "degenerate-identity";
        case Errc::not_a_member: return "not-a-member";
        case Errc::trust_boundary: return "trust-boundary";
        case Errc::stale_metadata: return "stale-metadata";
        case Errc::authentication_failed: return "authentication-failed";
        case Errc::not_found: return "not-found";
        case Errc::parse_error: return "parse-error";
        case Errc::key_lookup: return "key-lookup";
        case Errc::malformed_encoding: return "malformed-encoding";
        case Errc::trace_violation: return "trace-violation";
        case Errc::io_error: return "io-error";
    }
    return "unknown";
}

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::malformed_encoding, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::malformed_encoding, "non-hex character");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

void ByteWriter::u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::blob(ByteView data) {
    if (data.size() > 0xffffffffu) throw Error(Errc::invalid_input, "blob exceeds 4 GiB");
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
}

ByteView ByteReader::raw(std::size_t n) {
    if (n > remaining()) throw Error(Errc::malformed_encoding, "truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
    std::uint32_t v = 0;
    for (auto b : raw(4)) v = v << 8 | b;
    return v;
}

std::uint64_t ByteReader::u64() {
    std::uint64_t v = 0;
    for (auto b : raw(8)) v = v << 8 | b;
    return v;
}

Bytes ByteReader::blob() {
    auto n = u32();
    auto v = raw(n);
    return {v.begin(), v.end()};
}

std::string ByteReader::str() {
    auto n = u32();
    auto v = raw(n);
    return {v.begin(), v.end()};
}

void ByteReader::expect_end() const {
    if (remaining() != 0) throw Error(Errc::malformed_encoding, "trailing bytes");
}

}  // namespace gac
