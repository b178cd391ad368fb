#pragma once

#include <cstdint>
#include <random>

namespace greedylab {

/// Engine for sample `stream` of a run seeded with `seed`. Streams are
/// derived by std::seed_seq, so results do not depend on evaluation order.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace greedylab
