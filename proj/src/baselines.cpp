// SPDX-License-Identifier: Apache-2.0
#include "risee/baselines.hpp"

#include <limits>
#include <sstream>

#include "risee/rng.hpp"

namespace risee {

RisConfig random_ris(Index n, std::uint64_t seed) {
  if (n <= 0) throw Error("random_ris: n must be positive");
  auto gen = substream(seed, Stream::RandomRis);
  std::bernoulli_distribution coin(0.5);
  RVector q(n);
  for (Index i = 0; i < n; ++i) q[i] = coin(gen) ? 1.0 : -1.0;
  return RisConfig(std::move(q));
}

RisConfig all_off_ris(Index n) {
  if (n <= 0) throw Error("all_off_ris: n must be positive");
  return RisConfig::all(n, 1.0);
}

SearchOutcome successive_update(const ChannelRealization& chan, const RVector& p,
                                const RisCostParams& params, const RisConfig& q0, int max_sweeps,
                                int restarts, std::uint64_t seed) {
  SearchOutcome out;
  PowerCost cur = evaluate_cost(chan, p, q0, params);
  out.ris = q0;
  if (!cur.feasible) {
    out.ris = initial_feasible_q(chan, p, params, restarts, seed);
    cur = evaluate_cost(chan, p, out.ris, params);
  }
  out.g = cur.g;
  out.g_trace.push_back(cur.g);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    out.epochs = sweep;
    int kept = 0;
    for (Index n = 0; n < out.ris.size(); ++n) {
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
    if (kept == 0) break;
  }
  return out;
}

RisConfig enumeration_state(Index n, std::uint64_t index) {
  RVector q(n);
  for (Index i = 0; i < n; ++i) q[i] = ((index >> (n - 1 - i)) & 1U) ? 1.0 : -1.0;
  return RisConfig(std::move(q));
}

namespace {

void check_cap(Index n, int cap, const char* what) {
  if (n > cap) {
    std::ostringstream os;
    os << what << ": N=" << n << " exceeds the enumeration cap of " << cap;
    throw CapExceeded(os.str());
  }
}

}  // namespace

OracleResult brute_force_g(const ChannelRealization& chan, const RVector& p,
                           const RisCostParams& params) {
  const Index N = chan.N();
  check_cap(N, kBruteForceGCap, "brute_force_g");
  OracleResult out;
  out.best_value = std::numeric_limits<double>::infinity();
  bool found = false;
  const std::uint64_t total = std::uint64_t{1} << N;
  for (std::uint64_t i = 0; i < total; ++i) {
    const RisConfig q = enumeration_state(N, i);
    const PowerCost cost = evaluate_cost(chan, p, q, params);
    ++out.evaluated_count;
    if (!cost.feasible) {
      ++out.infeasible_count;
      continue;
    }
    if (!found || cost.g < out.best_value) {
      out.best_value = cost.g;
      out.best_q = q;
      found = true;
    }
  }
  if (!found) throw AllInfeasible("brute_force_g: every RIS state violates the power budget");
  return out;
}

OracleResult brute_force_ee(const ChannelRealization& chan, const SystemConfig& cfg) {
  const Index N = chan.N();
  check_cap(N, kBruteForceEeCap, "brute_force_ee");
  OracleResult out;
  out.best_value = -std::numeric_limits<double>::infinity();
  bool found = false;
  const std::uint64_t total = std::uint64_t{1} << N;
  for (std::uint64_t i = 0; i < total; ++i) {
    const RisConfig q = enumeration_state(N, i);
    ++out.evaluated_count;
    RVector t;
    try {
      t = t_coefficients(effective_channel(chan, q), cfg.cond_cap);
    } catch (const SingularChannel&) {
      ++out.infeasible_count;
      continue;
    }
    const AllocProblem prob = make_alloc_problem(cfg, t, q.on_count());
    if (!prob.is_feasible()) {
      ++out.infeasible_count;
      continue;
    }
    PowerAllocation alloc = dinkelbach(prob);
    EEReport rep = metrics(cfg, q, alloc.p, t);
    if (!found || rep.ee > out.best_value) {
      out.best_value = rep.ee;
      out.best_q = q;
      out.best_alloc = std::move(alloc);
      out.best_report = std::move(rep);
      found = true;
    }
  }
  if (!found) throw AllInfeasible("brute_force_ee: no RIS state admits a feasible allocation");
  return out;
}

}  // namespace risee
