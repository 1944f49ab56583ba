#pragma once

#include <cstdint>
#include <random>

namespace hassc {

// splitmix64 step; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-consumer seed stream: consumer(master, 0), consumer(master, 1), ...
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64(s);
    return out;
}

// Unbiased uniform draw in [0, n) from a fully specified engine. Avoids
// std::uniform_int_distribution, whose output is implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace hassc
