// SPDX-License-Identifier: Apache-2.0
#include "risee/ao.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

#include "risee/baselines.hpp"
#include "risee/power_alloc.hpp"
#include "risee/rng.hpp"

namespace risee {

std::string to_string(Method method) {
  switch (method) {
    case Method::Gradient: return "gradient";
    case Method::Sdp: return "sdp";
    case Method::Random: return "random";
    case Method::AllOff: return "all_off";
    case Method::Successive: return "successive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Gradient, Method::Sdp, Method::Random, Method::AllOff, Method::Successive})
    if (name == to_string(m)) return m;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected gradient, sdp, random, all_off or successive)");
}

namespace {

struct Evaluated {
  RisConfig ris;
  RVector t;
  EEReport report;
};

// t(q) or nothing when the cascade channel is singular.
std::optional<RVector> try_t(const SystemConfig& cfg, const ChannelRealization& chan,
                             const RisConfig& ris) {
  try {
    return t_coefficients(effective_channel(chan, ris), cfg.cond_cap);
  } catch (const SingularChannel&) {
    return std::nullopt;
  }
}

bool allocation_feasible(const SystemConfig& cfg, const RVector& t) {
  return t.sum() * cfg.p_min() <= cfg.Pmax;
}

RisConfig starting_state(const SystemConfig& cfg, const ChannelRealization& chan,
                         const AoOptions& opts) {
  const Index N = chan.N();
  if (opts.method == Method::AllOff) return all_off_ris(N);
  if (opts.method == Method::Random) return random_ris(N, opts.seed);
  if (opts.start) {
    if (opts.start->size() != N) throw DimensionMismatch("run_ao: start state has the wrong length");
    return *opts.start;
  }

  std::vector<RisConfig> candidates;
  if (opts.initial == InitialPolicy::Random) candidates.push_back(random_ris(N, opts.seed));
  candidates.push_back(all_off_ris(N));
  candidates.push_back(RisConfig::all(N, -1.0));
  for (int r = 0; r < opts.restarts; ++r)
    candidates.push_back(random_ris(N, derive_seed(opts.seed, Stream::Restarts, static_cast<std::uint64_t>(r))));

  if (opts.initial != InitialPolicy::BestOfRestarts) {
    for (const auto& c : candidates) {
      auto t = try_t(cfg, chan, c);
      if (t && allocation_feasible(cfg, *t)) return c;
    }
  } else {
    std::optional<RisConfig> best;
    double best_ee = -1.0;
    for (const auto& c : candidates) {
      auto t = try_t(cfg, chan, c);
      if (!t || !allocation_feasible(cfg, *t)) continue;
      const PowerAllocation alloc = dinkelbach(make_alloc_problem(cfg, *t, c.on_count()));
      const double ee = metrics(cfg, c, alloc.p, *t).ee;
      if (ee > best_ee) {
        best_ee = ee;
        best = c;
      }
    }
    if (best) return *best;
  }
  throw NoFeasibleStart("no starting RIS state admits a feasible power allocation");
}

TracePoint point(int iteration, Stage stage, const EEReport& r) {
  return TracePoint{iteration, stage, r.se, r.ee, r.tx_power, r.on_count};
}

template <class Fn>
RisConfig annotate(int iteration, Fn&& fn) {
  auto prefix = [&] {
    std::ostringstream os;
    os << "AO iteration " << iteration << ", RIS step: ";
    return os.str();
  };
  try {
    return fn();
  } catch (const SolverFailure& e) {
    throw SolverFailure(prefix() + e.what());
  } catch (const NoFeasibleStart& e) {
    throw NoFeasibleStart(prefix() + e.what());
  } catch (const SingularChannel& e) {
    throw SingularChannel(prefix() + e.what());
  }
}

}  // namespace

EEReport run_ao(const SystemConfig& cfg, const ChannelRealization& chan, const AoOptions& opts) {
  cfg.validate();
  if (chan.N() != cfg.N() || chan.M() != cfg.M() || chan.K() != cfg.K)
    throw DimensionMismatch("run_ao: channel dimensions do not match the config");
  if (!(opts.rel_ee_tol > 0.0) || opts.max_ao_iters < 1) throw ConfigError("run_ao: bad AO options");

  const RisCostParams params = RisCostParams::from(cfg);
  RisConfig q = starting_state(cfg, chan, opts);
  auto t0 = try_t(cfg, chan, q);
  if (!t0 || !allocation_feasible(cfg, *t0))
    throw NoFeasibleStart("run_ao: starting RIS state admits no feasible allocation");
  RVector t = *t0;

  EEReport cur;
  std::vector<TracePoint> trace;
  double previous_end = 0.0;
  int iteration = 0;
  bool converged = false;
  const bool fixed_state = opts.method == Method::AllOff || opts.method == Method::Random;

  for (iteration = 1; iteration <= opts.max_ao_iters; ++iteration) {
    // P-step.
    const PowerAllocation alloc = dinkelbach(make_alloc_problem(cfg, t, q.on_count()));
    cur = metrics(cfg, q, alloc.p, t);
    trace.push_back(point(iteration, Stage::PStep, cur));

    if (fixed_state) {
      trace.push_back(point(iteration, Stage::ThetaStep, cur));
      converged = true;
      break;
    }

    // RIS step with p held fixed.
    const RVector& p = alloc.p;
    const std::uint64_t step_seed = derive_seed(opts.seed, Stream::AoStep, static_cast<std::uint64_t>(iteration));
    const RisConfig proposal = annotate(iteration, [&]() -> RisConfig {
      switch (opts.method) {
        case Method::Gradient: {
          GradSearchParams gp = opts.grad;
          gp.seed = step_seed;
          return search_max_gradient(chan, p, params, gp, q).ris;
        }
        case Method::Successive:
          return successive_update(chan, p, params, q, opts.max_sweeps, opts.restarts, step_seed).ris;
        case Method::Sdp: {
          const SdpProblem prob = assemble(chan, p, params);
          try {
            const SdpSolution sol = solve_relaxation(prob, opts.sdp, q);
            return round_solution(sol, prob, chan, p, opts.sdp_rounds, step_seed, cfg.cond_cap).ris;
          } catch (const NoFeasibleRounding&) {
            return q;
          } catch (const RelaxationInfeasible&) {
            return q;
          }
        }
        default: return q;
      }
    });

    if (!(proposal == q)) {
      if (auto tp = try_t(cfg, chan, proposal)) {
        EEReport cand = metrics(cfg, proposal, p, *tp);
        if (cand.feasible && cand.ee >= cur.ee) {
          q = proposal;
          t = *tp;
          cur = std::move(cand);
        }
      }
    }
    trace.push_back(point(iteration, Stage::ThetaStep, cur));

    if (iteration >= 2 && cur.ee - previous_end < opts.rel_ee_tol * previous_end) {
      converged = true;
      break;
    }
    previous_end = cur.ee;
  }

  cur.trace = std::move(trace);
  cur.ao_iterations = std::min(iteration, opts.max_ao_iters);
  cur.converged = converged;
  return cur;
}

}  // namespace risee
