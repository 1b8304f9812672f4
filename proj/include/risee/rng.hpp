// SPDX-License-Identifier: Apache-2.0
//
// Seed-derived random substreams. Each (master seed, stream tag, index)
// triple maps to an independent std::mt19937_64 state through std::seed_seq,
// so adding users or draws never perturbs other components of a run.
#pragma once

#include <cstdint>
#include <random>

namespace risee {

enum class Stream : std::uint32_t {
  BsLinkAngles = 1,
  BsLinkNlos = 2,
  UserAngles = 3,
  UserNlos = 4,
  RandomRis = 5,
  Restarts = 6,
  Rounding = 7,
  AoStep = 8,
};

inline std::mt19937_64 substream(std::uint64_t master, Stream tag, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Deterministic child seed for nested components (e.g. per AO iteration).
inline std::uint64_t derive_seed(std::uint64_t master, Stream tag, std::uint64_t index = 0) {
  auto gen = substream(master, tag, index);
  return gen();
}

}  // namespace risee
