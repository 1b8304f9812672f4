// SPDX-License-Identifier: Apache-2.0
#include "risee/ris_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "risee/baselines.hpp"
#include "risee/rng.hpp"

namespace risee {

PowerCost evaluate_cost(const ChannelRealization& chan, const RVector& p, const RVector& q,
                        const RisCostParams& params) {
  PowerCost out;
  const double ris_term = -0.5 * params.P0 * q.sum();
  try {
    const RVector t = t_coefficients(effective_channel(chan, q), params.cond_cap);
    out.tx_power = p.dot(t);
    out.g = ris_term + out.tx_power;
    out.feasible = out.tx_power <= params.Pmax + kPowerSlack;
  } catch (const SingularChannel&) {
    out.tx_power = std::numeric_limits<double>::infinity();
    out.g = std::numeric_limits<double>::infinity();
    out.feasible = false;
  }
  return out;
}

double objective_g(const ChannelRealization& chan, const RVector& p, const RVector& q,
                   const RisCostParams& params) {
  return evaluate_cost(chan, p, q, params).g;
}

RVector gradient_g(const ChannelRealization& chan, const RVector& p, const RVector& q,
                   const RisCostParams& params) {
  const CMatrix Hh = effective_channel(chan, q);
  const Index K = Hh.rows();
  if (p.size() != K) throw DimensionMismatch("gradient_g: p length differs from K");
  // Reuse the checked factorization path for the singularity policy.
  t_coefficients(Hh, params.cond_cap);
  const CMatrix Minv = gram(Hh).inverse();

  // d(H^H H)/dq_n = c_n r_n + (c_n r_n)^H with c_n = F(n,:)^H and r_n = G(n,:) H.
  // [Minv D_n Minv]_kk = 2 Re(U_kn R_nk), U = Minv F^H, R = G H Minv.
  const CMatrix U = Minv * chan.F.adjoint();        // K x N
  const CMatrix R = chan.G * (Hh.adjoint() * Minv);  // N x K
  const Index N = q.size();
  RVector grad(N);
  for (Index n = 0; n < N; ++n) {
    double acc = 0.0;
    for (Index k = 0; k < K; ++k) acc += p[k] * (U(k, n) * R(n, k)).real();
    grad[n] = -0.5 * params.P0 - 2.0 * acc;
  }
  return grad;
}

RisConfig initial_feasible_q(const ChannelRealization& chan, const RVector& p,
                             const RisCostParams& params, int restarts, std::uint64_t seed) {
  const Index N = chan.N();
  std::vector<RisConfig> candidates{RisConfig::all(N, 1.0), RisConfig::all(N, -1.0)};
  for (int r = 0; r < restarts; ++r)
    candidates.push_back(random_ris(N, derive_seed(seed, Stream::Restarts, static_cast<std::uint64_t>(r))));

  std::optional<RisConfig> best;
  double best_g = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const PowerCost cost = evaluate_cost(chan, p, c, params);
    if (!cost.feasible) continue;
    if (!best || cost.g < best_g || (cost.g == best_g && c.lexicographically_less(*best))) {
      best = c;
      best_g = cost.g;
    }
  }
  if (!best) throw NoFeasibleStart("no feasible RIS state among all-OFF, all-ON and random restarts");
  return *best;
}

SearchOutcome search_max_gradient(const ChannelRealization& chan, const RVector& p,
                                  const RisCostParams& params, const GradSearchParams& search,
                                  const RisConfig& q0) {
  if (!(search.rho > 0.0 && search.rho <= 1.0)) throw Error("search: rho must lie in (0, 1]");
  if (search.eps < 1) throw Error("search: eps must be >= 1");

  SearchOutcome out;
  PowerCost cur = evaluate_cost(chan, p, q0, params);
  out.ris = q0;
  if (!cur.feasible) {
    out.ris = initial_feasible_q(chan, p, params, search.restarts, search.seed);
    cur = evaluate_cost(chan, p, out.ris, params);
  }
  out.g = cur.g;
  out.g_trace.push_back(cur.g);

  const Index N = out.ris.size();
  const auto tries = std::clamp<Index>(static_cast<Index>(std::lround(search.rho * N)), 1, N);
  std::vector<Index> order(static_cast<std::size_t>(N));

  // do-while: the first epoch always runs.
  for (int epoch = 1; epoch <= search.max_epochs; ++epoch) {
    out.epochs = epoch;
    const RVector grad = gradient_g(chan, p, out.ris.q(), params);
    const RVector score = out.ris.q().cwiseProduct(grad);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return score[a] > score[b]; });

    int kept = 0;
    for (Index j = 0; j < tries; ++j) {
      const Index n = order[static_cast<std::size_t>(j)];
      out.ris.flip(n);
      const PowerCost trial = evaluate_cost(chan, p, out.ris, params);
      if (trial.feasible && trial.g < out.g) {
        out.g = trial.g;
        out.g_trace.push_back(trial.g);
        ++kept;
      } else {
        out.ris.flip(n);
      }
    }
    if (kept < search.eps) break;
  }
  return out;
}

}  // namespace risee
