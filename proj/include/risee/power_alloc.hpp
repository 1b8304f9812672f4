// SPDX-License-Identifier: Apache-2.0
//
// Optimal per-user received powers for a fixed RIS state:
//
//   max_p  sum_k log2(1 + p_k / sigma2) / (P1 + sum_k p_k t_k / nu)
//   s.t.   sum_k p_k t_k <= Pmax,  p_k >= p_min
//
// solved by Dinkelbach iteration whose parametric subproblem has a
// water-filling closed form.
#pragma once

#include "risee/model.hpp"

namespace risee {

struct AllocProblem {
  RVector t;              // ZF transmit-cost coefficients, all > 0
  double sigma2 = 1.0;    // W
  double p_min = 0.0;     // W
  double Pmax = 1.0;      // W
  double P1_const = 0.0;  // P_static + P0 * on_count, W
  double nu = 1.0;

  Index K() const { return t.size(); }

  // Throws Error for malformed input (K = 0, t <= 0, ...); infeasibility is
  // reported separately by is_feasible().
  void validate() const;
  bool is_feasible() const;
};

AllocProblem make_alloc_problem(const SystemConfig& cfg, const RVector& t, int on_count);

// Root of s(zeta) = sum_k max(zeta - t_k sigma2, t_k p_min) - Pmax, found by
// walking the sorted breakpoints t_k (sigma2 + p_min). Throws Infeasible.
double solve_zeta(const AllocProblem& prob);

// Maximizer of sum log2(1 + p/sigma2) - lambda (P1 + sum p t / nu) over the
// feasible set: xi = min(zeta, nu / (lambda ln 2)), p_k = max((xi - t_k sigma2)/t_k, p_min).
RVector inner_solution(const AllocProblem& prob, double lambda);

// sum_k log2(1 + p_k / sigma2)
double alloc_rate(const AllocProblem& prob, const RVector& p);
// P1 + sum_k p_k t_k / nu
double alloc_power(const AllocProblem& prob, const RVector& p);
// rate - lambda * power
double parametric_objective(const AllocProblem& prob, const RVector& p, double lambda);

struct DinkelbachOptions {
  double tol = 1e-9;  // absolute, on lambda
  int max_iters = 50;
};

PowerAllocation dinkelbach(const AllocProblem& prob, const DinkelbachOptions& opts = {});

}  // namespace risee
