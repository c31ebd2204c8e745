#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "gfs/design.hpp"

namespace gfs {

struct Digest128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
    friend bool operator==(const Digest128&, const Digest128&) = default;
    friend bool operator<(const Digest128& a, const Digest128& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(32, '0');
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t word = i < 8 ? hi : lo;
            const int shift = 56 - 8 * (i % 8);
            const std::uint8_t byte = static_cast<std::uint8_t>(word >> shift);
            out[2 * i] = digits[byte >> 4];
            out[2 * i + 1] = digits[byte & 0xf];
        }
        return out;
    }
};

struct Digest128Hash {
    std::size_t operator()(const Digest128& d) const noexcept {
        return static_cast<std::size_t>(d.hi ^ (d.lo * 0x9e3779b97f4a7c15ULL));
    }
};

namespace detail {

// MurmurHash3 x64 128-bit (public domain reference algorithm).
inline Digest128 murmur3_128(const void* key, std::size_t len, std::uint64_t seed) {
    const std::uint8_t* data = static_cast<const std::uint8_t*>(key);
    const std::size_t nblocks = len / 16;
    std::uint64_t h1 = seed, h2 = seed;
    const std::uint64_t c1 = 0x87c37b91114253d5ULL;
    const std::uint64_t c2 = 0x4cf5ad432745937fULL;
    const auto rotl = [](std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); };
    const auto load = [&](std::size_t i) {
        std::uint64_t v;
        std::memcpy(&v, data + 8 * i, 8);
        return v;
    };

    for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t k1 = load(2 * i);
        std::uint64_t k2 = load(2 * i + 1);
        k1 *= c1; k1 = rotl(k1, 31); k1 *= c2; h1 ^= k1;
        h1 = rotl(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;
        k2 *= c2; k2 = rotl(k2, 33); k2 *= c1; h2 ^= k2;
        h2 = rotl(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
    }

    const std::uint8_t* tail = data + nblocks * 16;
    std::uint64_t k1 = 0, k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= std::uint64_t(tail[14]) << 48; [[fallthrough]];
        case 14: k2 ^= std::uint64_t(tail[13]) << 40; [[fallthrough]];
        case 13: k2 ^= std::uint64_t(tail[12]) << 32; [[fallthrough]];
        case 12: k2 ^= std::uint64_t(tail[11]) << 24; [[fallthrough]];
        case 11: k2 ^= std::uint64_t(tail[10]) << 16; [[fallthrough]];
        case 10: k2 ^= std::uint64_t(tail[9]) << 8; [[fallthrough]];
        case 9:
            k2 ^= std::uint64_t(tail[8]);
            k2 *= c2; k2 = rotl(k2, 33); k2 *= c1; h2 ^= k2;
            [[fallthrough]];
        case 8: k1 ^= std::uint64_t(tail[7]) << 56; [[fallthrough]];
        case 7: k1 ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
        case 6: k1 ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
        case 5: k1 ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
        case 4: k1 ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
        case 3: k1 ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
        case 2: k1 ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
        case 1:
            k1 ^= std::uint64_t(tail[0]);
            k1 *= c1; k1 = rotl(k1, 31); k1 *= c2; h1 ^= k1;
            break;
        case 0: break;
    }

    h1 ^= len; h2 ^= len;
    h1 += h2; h2 += h1;
    const auto fmix = [](std::uint64_t k) {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        k *= 0xc4ceb9fe1a85ec53ULL;
        k ^= k >> 33;
        return k;
    };
    h1 = fmix(h1); h2 = fmix(h2);
    h1 += h2; h2 += h1;
    return Digest128{h1, h2};
}

inline void append_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

} // namespace detail

// Canonical 128-bit key of a design: depends only on the aggregated
// (sample, mass) table, so any two layouts inducing the same design
// collide by construction.
inline Digest128 design_key(const Design& design) {
    std::vector<std::uint8_t> buf;
    buf.reserve(32 + design.table().size() * 48);
    detail::append_u64(buf, design.resolution());
    detail::append_u64(buf, design.unit_count());
    detail::append_u64(buf, design.table().size());
    for (const auto& row : design.table()) {
        detail::append_u64(buf, row.mass);
        detail::append_u64(buf, row.sample.size());
        for (std::uint32_t k : row.sample) detail::append_u64(buf, k);
    }
    return detail::murmur3_128(buf.data(), buf.size(), 0x6766735f6b657931ULL);
}

} // namespace gfs
