// SPDX-License-Identifier: Apache-2.0
//
// RIS analog beamforming with the power allocation held fixed:
//
//   g(q) = -P0/2 * 1^T q + sum_k p_k t_k(q),   s.t. sum_k p_k t_k(q) <= Pmax.
//
// g differs from P_RIS + P_transmit by the constant -N P0 / 2.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "risee/model.hpp"

namespace risee {

struct RisCostParams {
  double P0 = 0.0;
  double Pmax = 1.0;
  double cond_cap = 1e12;

  static RisCostParams from(const SystemConfig& cfg) { return {cfg.P0, cfg.Pmax, cfg.cond_cap}; }
};

struct PowerCost {
  double g = 0.0;         // +inf when H^H H is singular
  double tx_power = 0.0;  // sum_k p_k t_k, +inf when singular
  bool feasible = false;
};

// Evaluates g and feasibility for any q (continuous values allowed).
PowerCost evaluate_cost(const ChannelRealization& chan, const RVector& p, const RVector& q,
                        const RisCostParams& params);
inline PowerCost evaluate_cost(const ChannelRealization& chan, const RVector& p,
                               const RisConfig& ris, const RisCostParams& params) {
  return evaluate_cost(chan, p, ris.q(), params);
}

double objective_g(const ChannelRealization& chan, const RVector& p, const RVector& q,
                   const RisCostParams& params);
inline double objective_g(const ChannelRealization& chan, const RVector& p, const RisConfig& ris,
                          const RisCostParams& params) {
  return objective_g(chan, p, ris.q(), params);
}

// dg/dq_n = -P0/2 - sum_k p_k [(H^H H)^{-1} dH^H H/dq_n (H^H H)^{-1}]_kk.
// Throws SingularChannel.
RVector gradient_g(const ChannelRealization& chan, const RVector& p, const RVector& q,
                   const RisCostParams& params);

struct GradSearchParams {
  double rho = 0.2;     // fraction of elements tried per epoch
  int eps = 1;          // stop when fewer flips than this are kept in an epoch
  int max_epochs = 50;
  int restarts = 10;    // random starting points tried when q0 is infeasible
  std::uint64_t seed = 0;
};

struct SearchOutcome {
  RisConfig ris;
  double g = 0.0;
  std::vector<double> g_trace;  // g after the start and after every kept flip
  int epochs = 0;
};

// Best feasible of {all +1, all -1, `restarts` seeded uniform draws} by g.
// Throws NoFeasibleStart.
RisConfig initial_feasible_q(const ChannelRealization& chan, const RVector& p,
                             const RisCostParams& params, int restarts, std::uint64_t seed);

// Ordered coordinate flips by descending q_n * dg/dq_n; a flip is kept only
// if the result is feasible and strictly lowers g. Falls back to
// initial_feasible_q when q0 is infeasible.
SearchOutcome search_max_gradient(const ChannelRealization& chan, const RVector& p,
                                  const RisCostParams& params, const GradSearchParams& search,
                                  const RisConfig& q0);

}  // namespace risee
