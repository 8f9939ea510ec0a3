// Copyright 2026 The neelmqc Authors
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

// Counter-based random streams for reproducible parallel trajectories.
//
// Generator: Philox4x32-10 (Salmon et al., SC'11), keyed by the 64-bit master
// seed. A normal deviate is a pure function of
//
//   (seed, trajectory r, step n, axis block, refinement level)
//
// laid out in the 128-bit counter as
//
//   word0 = n low 32 bits, word1 = n high 32 bits, word2 = r,
//   word3 = (level << 1) | block     block 0 -> (x, y), block 1 -> (z, unused)
//
// One Philox block yields two 64-bit words, turned into two standard normals by
// Box-Muller. Refinement level L > 0 splits each base step into 2^L substeps
// with a Brownian-bridge construction, so that a refined path averages back to
// the coarse one exactly:
//
//   R_L(2j)   = (R_{L-1}(j) + Z_L(j)) / sqrt(2)
//   R_L(2j+1) = (R_{L-1}(j) - Z_L(j)) / sqrt(2)
//
// where Z_L(j) is drawn from the counter (j, r, level L).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace neelmqc {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Two independent standard normals from one Philox block.
inline std::pair<double, double> box_muller(const Philox4x32::Counter& bits) {
    const std::uint64_t a = (std::uint64_t{bits[0]} << 32) | bits[1];
    const std::uint64_t b = (std::uint64_t{bits[2]} << 32) | bits[3];
    constexpr double inv53 = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * inv53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * inv53;          // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

struct NormalTriple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint32_t trajectory, int refine_level = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trajectory_(trajectory),
          level_(refine_level) {}

    int refine_level() const { return level_; }
    std::uint32_t trajectory() const { return trajectory_; }

    // Standard normals for (fine) step `step`; z is only drawn when asked.
    NormalTriple at(std::uint64_t step, bool with_z) const { return at_level(level_, step, with_z); }

    // Sequential access.
    NormalTriple next(bool with_z) { return at(position_++, with_z); }
    std::uint64_t position() const { return position_; }

private:
    NormalTriple at_level(int level, std::uint64_t step, bool with_z) const {
        if (level == 0) {
            const auto [x, y] = box_muller(block(step, 0, 0));
            const double z = with_z ? box_muller(block(step, 0, 1)).first : 0.0;
            return {x, y, z};
        }
        const std::uint64_t parent = step >> 1;
        const double sign = (step & 1u) ? -1.0 : 1.0;
        const NormalTriple coarse = at_level(level - 1, parent, with_z);
        const auto [zx, zy] = box_muller(block(parent, level, 0));
        const double zz = with_z ? box_muller(block(parent, level, 1)).first : 0.0;
        constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        return {(coarse.x + sign * zx) * inv_sqrt2, (coarse.y + sign * zy) * inv_sqrt2,
                (coarse.z + sign * zz) * inv_sqrt2};
    }

    Philox4x32::Counter block(std::uint64_t index, int level, std::uint32_t which) const {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                      static_cast<std::uint32_t>(index >> 32), trajectory_,
                                      (static_cast<std::uint32_t>(level) << 1) | which};
        return Philox4x32::generate(ctr, key_);
    }

    Philox4x32::Key key_;
    std::uint32_t trajectory_;
    int level_;
    std::uint64_t position_ = 0;
};

}  // namespace neelmqc
