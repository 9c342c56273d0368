#pragma once

#include <cstdint>

#include "navalg/graph.hpp"

namespace navalg::rel64 {

// Relations over domains of at most 8 nodes packed into one word:
// entry (a,b) lives at bit 8*a+b, so byte a is row a. The closure and
// enumeration engines run on these; the general BinaryRelation is the
// boundary type.

using Rel = std::uint64_t;

constexpr int kMaxDomain = 8;

constexpr std::uint64_t row_mask(int n) {
    return n >= 8 ? 0xFFu : ((std::uint64_t{1} << n) - 1);
}

inline std::uint64_t row(Rel m, int a) { return (m >> (8 * a)) & 0xFF; }

inline Rel identity(int n) {
    Rel m = 0;
    for (int a = 0; a < n; ++a) m |= std::uint64_t{1} << (8 * a + a);
    return m;
}

inline Rel diversity(int n) {
    Rel m = 0;
    for (int a = 0; a < n; ++a)
        m |= (row_mask(n) & ~(std::uint64_t{1} << a)) << (8 * a);
    return m;
}

inline Rel full(int n) {
    Rel m = 0;
    for (int a = 0; a < n; ++a) m |= row_mask(n) << (8 * a);
    return m;
}

inline Rel compose(Rel x, Rel y, int n) {
    Rel out = 0;
    for (int a = 0; a < n; ++a) {
        std::uint64_t r = row(x, a);
        if (!r) continue;
        std::uint64_t acc = 0;
        while (r) {
            int b = __builtin_ctzll(r);
            r &= r - 1;
            acc |= row(y, b);
        }
        out |= acc << (8 * a);
    }
    return out;
}

/// 8x8 bit-matrix transpose (Hacker's Delight).
inline Rel transpose(Rel x) {
    std::uint64_t t;
    t = (x ^ (x >> 7)) & 0x00AA00AA00AA00AAULL;
    x = x ^ t ^ (t << 7);
    t = (x ^ (x >> 14)) & 0x0000CCCC0000CCCCULL;
    x = x ^ t ^ (t << 14);
    t = (x ^ (x >> 28)) & 0x00000000F0F0F0F0ULL;
    x = x ^ t ^ (t << 28);
    return x;
}

inline Rel proj1(Rel x, int n) {
    Rel out = 0;
    for (int a = 0; a < n; ++a)
        if (row(x, a)) out |= std::uint64_t{1} << (8 * a + a);
    return out;
}

inline Rel proj2(Rel x, int n) {
    std::uint64_t cols = 0;
    for (int a = 0; a < n; ++a) cols |= row(x, a);
    Rel out = 0;
    for (int b = 0; b < n; ++b)
        if (cols & (std::uint64_t{1} << b)) out |= std::uint64_t{1} << (8 * b + b);
    return out;
}

inline Rel coproj1(Rel x, int n) { return identity(n) & ~proj1(x, n); }
inline Rel coproj2(Rel x, int n) { return identity(n) & ~proj2(x, n); }

inline Rel from_relation(const BinaryRelation& r) {
    Rel m = 0;
    for (int a = 0; a < r.size(); ++a)
        for (int b = 0; b < r.size(); ++b)
            if (r.test(a, b)) m |= std::uint64_t{1} << (8 * a + b);
    return m;
}

inline BinaryRelation to_relation(Rel m, int n) {
    BinaryRelation r(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (m & (std::uint64_t{1} << (8 * a + b))) r.set(a, b);
    return r;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace navalg::rel64
