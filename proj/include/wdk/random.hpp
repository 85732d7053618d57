#pragma once

#include <cstdint>
#include <random>

namespace wdk {

/// Seeded generator with a fixed, platform-independent draw sequence.
/// std::mt19937_64 and std::seed_seq are fully specified by the standard;
/// bounded draws use rejection instead of std::uniform_int_distribution,
/// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [lo, hi]; requires lo <= hi.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo;
        if (span == ~std::uint64_t{0}) return next();
        const std::uint64_t bound = span + 1;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return lo + x % bound;
    }

    /// True with probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) { return uniform(0, den - 1) < num; }

private:
    std::mt19937_64 engine_;
};

} // namespace wdk
