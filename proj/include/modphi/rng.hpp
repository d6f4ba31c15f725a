#pragma once

#include <cstdint>
#include <random>

namespace modphi {

using Rng = std::mt19937_64;

/// Seed used whenever a caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20240611ULL;

/// Derives the seed of stream `index` from a master seed (SplitMix64 finalizer
/// applied to master + golden-ratio increments). Streams are used to give each
/// Monte Carlo block its own generator so results do not depend on threading.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
    return Rng(stream_seed(master, index));
}

}  // namespace modphi
