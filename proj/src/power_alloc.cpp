// SPDX-License-Identifier: Apache-2.0
#include "risee/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace risee {

void AllocProblem::validate() const {
  if (t.size() == 0) throw Error("AllocProblem: K must be positive");
  for (Index k = 0; k < t.size(); ++k)
    if (!(t[k] > 0.0) || !std::isfinite(t[k])) throw Error("AllocProblem: t_k must be finite and > 0");
  if (!(sigma2 > 0.0)) throw Error("AllocProblem: sigma2 must be > 0");
  if (!(p_min >= 0.0)) throw Error("AllocProblem: p_min must be >= 0");
  if (!(Pmax > 0.0)) throw Error("AllocProblem: Pmax must be > 0");
  if (!(P1_const >= 0.0)) throw Error("AllocProblem: P1 must be >= 0");
  if (!(nu > 0.0 && nu <= 1.0)) throw Error("AllocProblem: nu must lie in (0, 1]");
}

bool AllocProblem::is_feasible() const { return t.sum() * p_min <= Pmax; }

AllocProblem make_alloc_problem(const SystemConfig& cfg, const RVector& t, int on_count) {
  AllocProblem prob;
  prob.t = t;
  prob.sigma2 = cfg.sigma2();
  prob.p_min = cfg.p_min();
  prob.Pmax = cfg.Pmax;
  prob.P1_const = cfg.P_static + cfg.P0 * on_count;
  prob.nu = cfg.nu;
  prob.validate();
  return prob;
}

double solve_zeta(const AllocProblem& prob) {
  prob.validate();
  const Index K = prob.K();
  const double floor_cost = prob.t.sum() * prob.p_min;
  if (floor_cost > prob.Pmax) {
    std::ostringstream os;
    os << "power floors need " << floor_cost << " W but Pmax is " << prob.Pmax << " W";
    throw Infeasible(os.str());
  }

  std::vector<Index> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), Index{0});
  auto breakpoint = [&](Index k) { return prob.t[k] * (prob.sigma2 + prob.p_min); };
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return breakpoint(a) < breakpoint(b); });

  if (floor_cost == prob.Pmax) return breakpoint(order.front());

  // With the first j users active, s(zeta) = j zeta - sum_active t sigma2
  // + sum_inactive t p_min - Pmax on [bp_j, bp_{j+1}].
  double active_noise = 0.0;
  double inactive_floor = floor_cost;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const Index k = order[j];
    active_noise += prob.t[k] * prob.sigma2;
    inactive_floor -= prob.t[k] * prob.p_min;
    const double active = static_cast<double>(j + 1);
    const double zeta = (prob.Pmax + active_noise - inactive_floor) / active;
    const bool last = j + 1 == order.size();
    if (last || zeta <= breakpoint(order[j + 1])) return std::max(zeta, breakpoint(k));
  }
  return breakpoint(order.back());  // unreachable
}

RVector inner_solution(const AllocProblem& prob, double lambda) {
  if (!(lambda >= 0.0)) throw Error("inner_solution: lambda must be >= 0");
  const double zeta = solve_zeta(prob);
  const double xi = lambda > 0.0 ? std::min(zeta, prob.nu / (lambda * std::numbers::ln2)) : zeta;
  RVector p(prob.K());
  for (Index k = 0; k < prob.K(); ++k)
    p[k] = std::max((xi - prob.t[k] * prob.sigma2) / prob.t[k], prob.p_min);
  return p;
}

double alloc_rate(const AllocProblem& prob, const RVector& p) {
  return spectral_efficiency(p, prob.sigma2);
}

double alloc_power(const AllocProblem& prob, const RVector& p) {
  return prob.P1_const + p.dot(prob.t) / prob.nu;
}

double parametric_objective(const AllocProblem& prob, const RVector& p, double lambda) {
  return alloc_rate(prob, p) - lambda * alloc_power(prob, p);
}

PowerAllocation dinkelbach(const AllocProblem& prob, const DinkelbachOptions& opts) {
  PowerAllocation out;
  double lambda = 0.0;
  for (int i = 1; i <= opts.max_iters; ++i) {
    RVector p = inner_solution(prob, lambda);
    const double next = alloc_rate(prob, p) / alloc_power(prob, p);
    out.p = std::move(p);
    out.lambda_trace.push_back(next);
    out.iterations = i;
    const double gain = next - lambda;
    lambda = next;
    if (gain < opts.tol) break;
  }
  return out;
}

}  // namespace risee
