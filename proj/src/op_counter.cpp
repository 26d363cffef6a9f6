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

#include "gac/op_counter.hpp"

#include <array>
#include <utility>

namespace gac {

namespace {
thread_local OpCounts tls_counts;

using Field = std::uint64_t OpCounts::*;

// Single field table keeps the arithmetic and the CSV columns in sync.
constexpr std::array<std::pair<const char*, Field>, 15> kFields{{
    {"scalar_mul", &OpCounts::scalar_mul},
    {"scalar_inv", &OpCounts::scalar_inv},
    {"g1_exp", &OpCounts::g1_exp},
    {"g2_exp", &OpCounts::g2_exp},
    {"gt_exp", &OpCounts::gt_exp},
    {"pairing", &OpCounts::pairing},
    {"ibbe_encrypt", &OpCounts::ibbe_encrypt},
    {"ibbe_add", &OpCounts::ibbe_add},
    {"ibbe_remove", &OpCounts::ibbe_remove},
    {"ibbe_rekey", &OpCounts::ibbe_rekey},
    {"ibbe_decrypt", &OpCounts::ibbe_decrypt},
    {"aead_seal", &OpCounts::aead_seal},
    {"aead_open", &OpCounts::aead_open},
    {"he_wrap", &OpCounts::he_wrap},
    {"he_unwrap", &OpCounts::he_unwrap},
}};
}  // namespace

OpCounts& OpCounts::operator+=(const OpCounts& o) noexcept {
    for (auto [name, f] : kFields) this->*f += o.*f;
    return *this;
}

OpCounts operator-(OpCounts a, const OpCounts& b) noexcept {
    for (auto [name, f] : kFields) a.*f -= b.*f;
    return a;
}

std::vector<std::string> OpCounts::column_names() {
    std::vector<std::string> names;
    for (auto [name, f] : kFields) names.emplace_back(name);
    return names;
}

std::vector<std::uint64_t> OpCounts::values() const {
    std::vector<std::uint64_t> out;
    for (auto [name, f] : kFields) out.push_back(this->*f);
    return out;
}

namespace ops {
OpCounts& current() noexcept { return tls_counts; }
void reset() noexcept { tls_counts = {}; }
}  // namespace ops

}  // namespace gac
