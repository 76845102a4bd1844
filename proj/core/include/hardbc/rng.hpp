#pragma once

#include <cstdint>
#include <random>

namespace hbc {

enum RngStream : std::uint64_t {
    kStreamWeights = 0,
    kStreamBiases = 1,
    kStreamPerturb = 2,
    kStreamAudit = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent mt19937_64 per (seed, stream).
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL));
}

// Uniform on [-r, r]: 53 high bits to [0,1), then affine.
inline double uniform_sym(std::mt19937_64& gen, double r)
{
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return r * (2.0 * u - 1.0);
}

}  // namespace hbc
