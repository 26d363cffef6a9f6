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

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gac/ibbe.hpp"
#include "gac/rng.hpp"

namespace gac::test {

inline std::vector<std::string> identities(std::size_t n, const std::string& prefix = "user") {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

/// Random printable identities of length 4..19.
inline std::vector<std::string> random_identities(std::size_t n, Rng& rng) {
    std::vector<std::string> out;
    while (out.size() < n) {
        std::string s(4 + rng.uniform(16), ' ');
        for (auto& c : s) c = static_cast<char>('a' + rng.uniform(26));
        out.push_back(s + "#" + std::to_string(out.size()));
    }
    return out;
}

/// One setup per capacity, shared by every test in the binary.
inline const ibbe::SystemKeys& system_keys(std::size_t capacity) {
    static std::map<std::size_t, ibbe::SystemKeys> cache;
    auto it = cache.find(capacity);
    if (it != cache.end()) return it->second;
    auto rng = Rng::seeded(0xC0FFEE + capacity);
    return cache.emplace(capacity, ibbe::setup(capacity, rng)).first->second;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gac::test
