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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gac {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// Big-endian append-only encoder used by every on-disk and wire format.
class ByteWriter {
  public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }
    /// u32 length prefix followed by the bytes.
    void blob(ByteView data);
    void str(std::string_view s) { blob(as_bytes(s)); }

    [[nodiscard]] const Bytes& bytes() const& noexcept { return out_; }
    [[nodiscard]] Bytes take() && noexcept { return std::move(out_); }

  private:
    Bytes out_;
};

/// Bounds-checked decoder; throws Error(malformed_encoding) on truncation.
class ByteReader {
  public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t n);
    Bytes blob();
    std::string str();

    [[nodiscard]] std::size_t remaining() const noexcept { return data_.size() - pos_; }
    void expect_end() const;

  private:
    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace gac
