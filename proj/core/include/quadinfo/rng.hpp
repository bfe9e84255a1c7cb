#pragma once

#include <cstdint>
#include <random>

namespace quadinfo {

using Engine = std::mt19937_64;

// Seed of substream `stream` under a root seed. Distinct (seed, stream) pairs
// map to statistically independent engines; the mapping is a pure function.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace quadinfo
