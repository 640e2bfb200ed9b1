/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>

namespace hafnia {

/// Seed type. Identical seed, identical stream, on every platform:
/// generation is pure 64-bit integer mixing keyed by (seed, counter), so
/// streams do not depend on call order or thread count.
using Seed = std::uint64_t;

inline constexpr Seed kDefaultSeed = 0x5eed0001u;

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based uniform generator: value at (seed, counter).
inline std::uint64_t keyed_u64(Seed seed, std::uint64_t counter) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(counter * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
}

/// Uniform in [0, 1) with 53 random bits.
inline double keyed_unit(Seed seed, std::uint64_t counter) {
    return static_cast<double>(keyed_u64(seed, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal at sample index `idx`, Box-Muller on counters (2idx, 2idx+1).
inline double keyed_normal(Seed seed, std::uint64_t idx) {
    // u1 in (0,1]: guard the log.
    double u1 = 1.0 - keyed_unit(seed, 2 * idx);
    double u2 = keyed_unit(seed, 2 * idx + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Sequential convenience stream over the keyed generator.
class RngStream {
  public:
    explicit RngStream(Seed seed, std::uint64_t start = 0) : seed_(seed), counter_(start) {}

    std::uint64_t next_u64() { return keyed_u64(seed_, counter_++); }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive.
    long next_int(long lo, long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    double next_normal() {
        double u1 = 1.0 - next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Child stream with an independent counter space.
    RngStream fork(std::uint64_t tag) const { return RngStream(keyed_u64(seed_, 0xf0f0f0f0f0f0f0f0ull ^ tag)); }

    Seed seed() const { return seed_; }

  private:
    Seed seed_;
    std::uint64_t counter_;
};

}  // namespace hafnia
