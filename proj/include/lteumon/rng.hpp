#pragma once

#include <cstdint>

namespace lteumon {

// Stated 64-bit mixing function (golden-ratio combine + splitmix64
// finalizer).  Used to derive per-node streams and per-trial seeds; nesting
// mix64(mix64(base, i), j) keeps existing streams stable when new settings
// or trials are appended.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// splitmix64: small, fast, seedable, and splittable via mix64.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) via rejection; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = bound * (~0ull / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Inclusive integer range.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(below(std::uint64_t(hi - lo) + 1));
    }

    // [0, 1) with 53 random bits.
    double unit() { return double(next() >> 11) * 0x1.0p-53; }

    SplitMix64 split(std::uint64_t stream) const { return SplitMix64(mix64(state_, stream)); }

private:
    std::uint64_t state_;
};

}  // namespace lteumon
