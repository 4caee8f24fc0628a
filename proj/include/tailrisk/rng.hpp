#pragma once

#include <cstdint>
#include <random>

namespace tailrisk {

// All randomness in the library flows through std::mt19937_64 seeded via
// derive_seed. mt19937_64 output is specified bit-for-bit by the standard,
// so every sampling routine built on the helpers below is reproducible
// across platforms and compilers.

// Mixes one 64-bit word (splitmix64 finalizer). Good avalanche, cheap.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives a stream seed from a base seed and any number of integer tags
// (block size, replication index, ...). Order-sensitive by construction, so
// derive_seed(s, a, b) != derive_seed(s, b, a) in general.
constexpr std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, Tags... rest) {
    return derive_seed(mix64(base ^ mix64(tag)), rest...);
}

// Stable tag for a double-valued configuration knob (e.g. a tail index).
inline std::uint64_t seed_tag(double v) {
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::uint64_t bits;
    __builtin_memcpy(&bits, &v, sizeof bits);
    return bits;
}

// Uniform integer in [0, bound) by rejection, so the draw count per accepted
// value is deterministic given the engine state. Never use std::uniform_int_distribution
// here: its algorithm is implementation-defined.
inline std::uint64_t bounded_uniform(std::mt19937_64& eng, std::uint64_t bound) {
    // Smallest r with r % bound == 0 above the rejection threshold.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = eng();
        if (r >= threshold) return r % bound;
    }
}

// Uniform double strictly inside (0, 1): 53-bit mantissa centered on the
// cell midpoint, so neither endpoint can be returned. Safe to pass through
// quantile functions that diverge at 0 or 1.
inline double canonical_unit(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

}  // namespace tailrisk
