// Copyright 2026 The adaptq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based Gaussian streams. Every variate is a pure function of
// (seed, path_id, domain, index), so paths never share state and results do not
// depend on scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace adaptq {

/// Philox4x32-10 block cipher (Salmon et al., SC'11).
class Philox4x32 {
   public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

   private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static Counter single_round(const Counter &c, const Key &k) {
        const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

enum class StreamDomain : std::uint32_t {
    increments = 0,  ///< one N(0,1) per engine step
    refinement = 1,  ///< Brownian-bridge sub-increments inside a step
};

/// Standard normals 2*block and 2*block+1 of the stream keyed by (seed, path_id, domain),
/// from one Philox block via Box-Muller. block < 2^56.
inline std::array<double, 2> keyed_normal_pair(std::uint64_t seed, std::uint64_t path_id, StreamDomain domain,
                                               std::uint64_t block) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32) |
                                      (static_cast<std::uint32_t>(domain) << 24),
                                  static_cast<std::uint32_t>(path_id), static_cast<std::uint32_t>(path_id >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::generate(ctr, key);
    const std::uint64_t a = (std::uint64_t{out[1]} << 32) | out[0];
    const std::uint64_t b = (std::uint64_t{out[3]} << 32) | out[2];
    constexpr double kTwo53 = 1.0 / 9007199254740992.0;
    const double u1 = static_cast<double>((a >> 11) + 1) * kTwo53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * kTwo53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
}

/// Standard normal number `index` of the stream keyed by (seed, path_id, domain).
inline double keyed_normal(std::uint64_t seed, std::uint64_t path_id, StreamDomain domain, std::uint64_t index) {
    return keyed_normal_pair(seed, path_id, domain, index >> 1)[index & 1u];
}

}  // namespace adaptq
