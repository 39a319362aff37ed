#pragma once

#include <cstdint>
#include <random>

namespace geoflow {

/// Generator for chunk `chunk` of the stream `seed`. Results depend only on
/// (seed, chunk), so chunked Monte Carlo is reproducible under any schedule.
std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk);

}  // namespace geoflow
