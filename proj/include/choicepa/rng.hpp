#pragma once

#include <cstdint>
#include <random>

namespace choicepa {

/**
 * Seedable deterministic random stream used by every stochastic run.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard, and the bounded/unit-interval mappings below are explicit, so
 * a given seed produces the same draw sequence on every platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased uniform draw from {0, ..., bound-1}. Requires bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection of the biased window.
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace choicepa
