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
#include <limits>
#include <memory>
#include <span>

namespace gac {

/// Randomness source for every operation that needs it. Two flavours:
/// the operating system CSPRNG, and a seeded AES-256-CTR keystream whose
/// output is fully determined by the seed (replayable benchmarks, tests).
class Rng {
  public:
    using result_type = std::uint64_t;

    static Rng system();
    static Rng seeded(std::uint64_t seed);

    Rng(Rng&&) noexcept;
    Rng& operator=(Rng&&) noexcept;
    ~Rng();

    void fill(std::span<std::uint8_t> out);
    std::uint64_t next_u64();
    /// Uniform in [0, bound); bound must be nonzero.
    std::uint64_t uniform(std::uint64_t bound);
    [[nodiscard]] bool deterministic() const noexcept;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

  private:
    struct Impl;
    explicit Rng(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

}  // namespace gac
