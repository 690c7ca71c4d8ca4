// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "core/types.hpp"

namespace dcp::sim {

// Deterministic draw rule, fixed for cross-implementation replay:
//   stream(seed, purpose, a, b, c) =
//     m(m(m(m(seed ^ fnv1a64(purpose)) ^ a) ^ b) ^ c)
// where m is one SplitMix64 output step. Draws are keyed, not sequential,
// so their values do not depend on event processing order.

inline std::uint64_t splitmix64_step(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t stream(std::uint64_t seed, std::string_view purpose,
                            std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64_step(seed ^ fnv1a64(purpose));
  s = splitmix64_step(s ^ a);
  s = splitmix64_step(s ^ b);
  s = splitmix64_step(s ^ c);
  return s;
}

/// Uniform network delay in [lo, hi] for one (node, transaction) edge.
inline Tick uniform_delay(std::uint64_t seed, std::uint32_t node, const TxId& tx,
                          Tick lo, Tick hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<Tick>(stream(seed, "delay", node, tx.rollup, tx.seq) % span);
}

}  // namespace dcp::sim
