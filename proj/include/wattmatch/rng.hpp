// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_RNG_HPP
#define WATTMATCH_RNG_HPP

#include <cstdint>
#include <random>

namespace wattmatch {

/// Independent deterministic substream keyed by (seed, tags). Every random
/// draw in the library goes through one of these so that results depend only
/// on the seed and the logical role of the stream, never on scheduling.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t tag0 = 0,
                                  std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(tag0), static_cast<std::uint32_t>(tag0 >> 32),
      static_cast<std::uint32_t>(tag1), static_cast<std::uint32_t>(tag1 >> 32),
      static_cast<std::uint32_t>(tag2), static_cast<std::uint32_t>(tag2 >> 32)};
  return std::mt19937_64(seq);
}

// Stream tags; keep values stable, they are part of the reproducibility
// contract of seeded commands.
namespace stream {
inline constexpr std::uint64_t kContent = 1;
inline constexpr std::uint64_t kRender = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kRanking = 4;
}  // namespace stream

}  // namespace wattmatch

#endif
