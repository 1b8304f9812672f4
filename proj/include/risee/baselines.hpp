// SPDX-License-Identifier: Apache-2.0
//
// Reference RIS states and exhaustive oracles for small surfaces.
#pragma once

#include <cstdint>

#include "risee/power_alloc.hpp"
#include "risee/ris_gradient.hpp"

namespace risee {

// Uniform i.i.d. +-1 entries; deterministic per seed.
RisConfig random_ris(Index n, std::uint64_t seed);

// Theta = I: every element OFF, no RIS dissipation.
RisConfig all_off_ris(Index n);

// Element-by-element coordinate descent in index order n = 0..N-1: q_n is
// flipped iff the flip is feasible and strictly lowers g. Sweeps repeat
// until one keeps no flip or max_sweeps is reached.
SearchOutcome successive_update(const ChannelRealization& chan, const RVector& p,
                                const RisCostParams& params, const RisConfig& q0,
                                int max_sweeps = 50, int restarts = 10, std::uint64_t seed = 0);

struct OracleResult {
  RisConfig best_q;
  double best_value = 0.0;  // g (W) for the g oracle, EE (bits/J) for the EE oracle
  std::uint64_t evaluated_count = 0;
  std::uint64_t infeasible_count = 0;
  PowerAllocation best_alloc;  // EE oracle only
  EEReport best_report;        // EE oracle only
};

inline constexpr int kBruteForceGCap = 20;
inline constexpr int kBruteForceEeCap = 16;

// q for enumeration index i: q_n = +1 iff bit (N-1-n) of i is set, so index
// order equals lexicographic order with -1 < +1.
RisConfig enumeration_state(Index n, std::uint64_t index);

// Feasible minimizer of g over {-1,+1}^N; ties go to the lexicographically
// smallest q. Throws CapExceeded (N > 20) or AllInfeasible.
OracleResult brute_force_g(const ChannelRealization& chan, const RVector& p,
                           const RisCostParams& params);

// Global EE optimum under ZF: Dinkelbach for every q, keep the best.
// Throws CapExceeded (N > 16) or AllInfeasible.
OracleResult brute_force_ee(const ChannelRealization& chan, const SystemConfig& cfg);

}  // namespace risee
