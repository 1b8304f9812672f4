// SPDX-License-Identifier: Apache-2.0
//
// Semidefinite relaxation of the binary RIS problem. With the lifted
// variable X = [q; 1][q; 1]^T the cascade Gram matrix becomes linear in X,
//
//   H^H H = F0^H (X ⊙ G0) F0,
//
// and dropping rank(X) = 1 leaves the convex program
//
//   min  -P0/4 tr(E0 X) + tr(P (F0^H (X ⊙ G0) F0)^{-1})
//   s.t. tr(P (F0^H (X ⊙ G0) F0)^{-1}) <= Pmax,  diag(X) = 1,  X >= 0.
//
// It is solved by a primal log-barrier method with Newton centering over the
// off-diagonal entries of X; the unit diagonal is eliminated. Candidates are
// recovered by Gaussian hypersphere rounding.
#pragma once

#include <cstdint>
#include <optional>

#include "risee/ris_gradient.hpp"

namespace risee {

struct SdpProblem {
  RMatrix E0;  // (N+1)x(N+1): ones on the last row/column off the diagonal
  CMatrix F0;  // (N+1)xK: [F; 0]
  CMatrix G0;  // (N+1)x(N+1): [[G G^H, 0], [0, 0]]
  RVector p;   // diagonal of P
  double P0 = 0.0;
  double Pmax = 1.0;

  Index N() const { return F0.rows() - 1; }
  Index K() const { return F0.cols(); }

  // F0^H (X ⊙ G0) F0
  CMatrix inner_matrix(const RMatrix& X) const;
  // tr((F0^H (X ⊙ G0) F0 P^{-1})^{-1}); +inf when the inner matrix is singular.
  double trace_term(const RMatrix& X) const;
  // -P0/4 tr(E0 X) + trace_term(X); equals g(q) at X = lift(q).
  double objective(const RMatrix& X) const;
};

// [[q q^T, q], [q^T, 1]]
RMatrix lift(const RisConfig& ris);

SdpProblem assemble(const ChannelRealization& chan, const RVector& p, const RisCostParams& params);

struct SdpOptions {
  double rel_tol = 1e-7;   // target duality gap relative to |objective|
  double mu = 20.0;        // barrier parameter growth per outer step
  int max_newton = 2000;   // total Newton steps across all centerings
  double newton_tol = 1e-10;
};

struct SdpSolution {
  RMatrix X;                    // relaxed optimum, unit diagonal, PSD
  double objective_value = 0;   // primal value, same units as g
  double lower_bound = 0;       // objective_value - gap
  double gap = 0;               // barrier duality gap (N+2)/t
  double trace_term = 0;        // transmit-power term at X
  int newton_iterations = 0;
  int outer_iterations = 0;
};

// Throws RelaxationInfeasible when no PSD unit-diagonal X meets the power
// budget, SolverFailure on numerical breakdown. `hint` (e.g. the incumbent
// RIS state) is used only to find a strictly feasible start.
SdpSolution solve_relaxation(const SdpProblem& prob, const SdpOptions& opts = {},
                             const std::optional<RisConfig>& hint = std::nullopt);

struct RoundingOutcome {
  RisConfig ris;
  double g = 0.0;
  int feasible_candidates = 0;
};

// Eigenvalues of X(1:N,1:N) in [-1e-7, 0) are clipped to zero; more negative
// ones raise SolverFailure.
inline constexpr double kEigenClip = 1e-7;

// Factor V^T V = X(1:N,1:N), draw n_rounds unit vectors u, take
// q = sign(V^T u) (sign(0) = +1) and its negation, keep the feasible
// candidate with the lowest g. Throws NoFeasibleRounding.
RoundingOutcome round_solution(const SdpSolution& sol, const SdpProblem& prob,
                               const ChannelRealization& chan, const RVector& p, int n_rounds,
                               std::uint64_t seed, double cond_cap = 1e12);

}  // namespace risee
