#pragma once

#include <cstdint>
#include <random>

namespace loadgen {

using Rng = std::mt19937_64;

// Uniform in [0,1), built from the top 53 bits so draws are reproducible
// for a given seed independent of library distribution internals.
inline double uniform_co(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0,1].
inline double uniform_oc(Rng& rng) {
    return 1.0 - uniform_co(rng);
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace loadgen
