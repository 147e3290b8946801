// Copyright 2026 The qslack Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#ifndef QSLACK_RNG_HPP_INCLUDED
#define QSLACK_RNG_HPP_INCLUDED

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace qslack {

// SplitMix64 (Steele, Lea, Flood 2014). The constants below are the published
// ones, so generated instances are identical on every platform and in any
// language that implements the same draws. Distribution helpers are written out
// here instead of using <random> distributions, whose outputs are
// implementation-defined.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi] by rejection on the top of the 64-bit range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (range == 0) return static_cast<std::int64_t>((*this)());  // full 64-bit span
        const std::uint64_t limit = max() - (max() % range + 1) % range;
        std::uint64_t draw;
        do {
            draw = (*this)();
        } while (draw > limit);
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + draw % range);
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bit() noexcept { return ((*this)() >> 63) != 0; }

private:
    std::uint64_t state_;
};

}  // namespace qslack

#endif  // QSLACK_RNG_HPP_INCLUDED
