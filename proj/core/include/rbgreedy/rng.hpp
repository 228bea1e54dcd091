// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace rbgreedy {

// Seeded random stream with portable draw semantics. The standard engine is
// bit-exact across platforms; distributions are not, so the mappings from raw
// bits to doubles and bounded ints live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) with 53 random mantissa bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform in [0, n), unbiased via rejection.
    int index(int n) {
        if (n <= 0) throw std::invalid_argument("Rng::index: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return static_cast<int>(r % un);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace rbgreedy
