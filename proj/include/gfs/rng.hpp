#pragma once

#include <cstdint>
#include <random>

#include "gfs/error.hpp"

namespace gfs {

// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(base ^ mix64(a)) ^ mix64(b + 0x2545f4914f6cdd1dULL));
}

// Seeded random source. mt19937_64 output is fully specified by the
// standard and the bounded draw below avoids std::uniform_int_distribution,
// whose mapping is implementation-defined, so identical seeds give identical
// streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        detail::require(bound > 0, "Rng::below: bound must be positive");
        const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    // Uniform on the inclusive range [lo, hi].
    std::uint64_t uniform_inclusive(std::uint64_t lo, std::uint64_t hi) {
        detail::require(lo <= hi, "Rng::uniform_inclusive: empty range");
        if (lo == 0 && hi == ~std::uint64_t{0}) return engine_();
        return lo + below(hi - lo + 1);
    }

    // Uniform on [0, 1); 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace gfs
