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

#include <cstdint>
#include <string>
#include <vector>

namespace gac {

/// Instrumentation counters for the operations whose counts carry the
/// complexity claims: field and group arithmetic, IBBE-level calls and
/// envelope operations. Counters are thread-local.
struct OpCounts {
    std::uint64_t scalar_mul = 0;
    std::uint64_t scalar_inv = 0;
    std::uint64_t g1_exp = 0;
    std::uint64_t g2_exp = 0;
    std::uint64_t gt_exp = 0;
    std::uint64_t pairing = 0;

    std::uint64_t ibbe_encrypt = 0;
    std::uint64_t ibbe_add = 0;
    std::uint64_t ibbe_remove = 0;
    std::uint64_t ibbe_rekey = 0;
    std::uint64_t ibbe_decrypt = 0;

    std::uint64_t aead_seal = 0;
    std::uint64_t aead_open = 0;
    std::uint64_t he_wrap = 0;
    std::uint64_t he_unwrap = 0;

    /// Group exponentiations of every kind plus pairings.
    [[nodiscard]] std::uint64_t group_ops() const noexcept {
        return g1_exp + g2_exp + gt_exp + pairing;
    }

    OpCounts& operator+=(const OpCounts& o) noexcept;
    friend OpCounts operator-(OpCounts a, const OpCounts& b) noexcept;
    friend bool operator==(const OpCounts&, const OpCounts&) = default;

    static std::vector<std::string> column_names();
    [[nodiscard]] std::vector<std::uint64_t> values() const;
};

namespace ops {

OpCounts& current() noexcept;
inline OpCounts snapshot() noexcept { return current(); }
void reset() noexcept;

}  // namespace ops

/// Records the counter delta accumulated during its lifetime.
class OpScope {
  public:
    OpScope() : start_(ops::snapshot()) {}
    [[nodiscard]] OpCounts delta() const noexcept { return ops::snapshot() - start_; }

  private:
    OpCounts start_;
};

}  // namespace gac
