// SPDX-License-Identifier: Apache-2.0
#include "risee/ris_sdp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "risee/rng.hpp"

namespace risee {

CMatrix SdpProblem::inner_matrix(const RMatrix& X) const {
  return F0.adjoint() * (X.cast<cdouble>().cwiseProduct(G0)) * F0;
}

double SdpProblem::trace_term(const RMatrix& X) const {
  const CMatrix M = inner_matrix(X);
  Eigen::LLT<CMatrix> llt(M);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const CMatrix Minv = llt.solve(CMatrix::Identity(K(), K()));
  double tr = 0.0;
  for (Index k = 0; k < K(); ++k) tr += p[k] * Minv(k, k).real();
  return tr;
}

double SdpProblem::objective(const RMatrix& X) const {
  return -0.25 * P0 * (E0.cwiseProduct(X)).sum() + trace_term(X);
}

RMatrix lift(const RisConfig& ris) {
  RVector v(ris.size() + 1);
  v << ris.q(), 1.0;
  return v * v.transpose();
}

SdpProblem assemble(const ChannelRealization& chan, const RVector& p, const RisCostParams& params) {
  const Index N = chan.N();
  const Index K = chan.K();
  if (p.size() != K) throw DimensionMismatch("assemble: p length differs from K");
  SdpProblem prob;
  prob.E0 = RMatrix::Zero(N + 1, N + 1);
  prob.E0.col(N).head(N).setOnes();
  prob.E0.row(N).head(N).setOnes();
  prob.F0 = CMatrix::Zero(N + 1, K);
  prob.F0.topRows(N) = chan.F;
  prob.G0 = CMatrix::Zero(N + 1, N + 1);
  prob.G0.topLeftCorner(N, N) = chan.G * chan.G.adjoint();
  prob.p = p;
  prob.P0 = params.P0;
  prob.Pmax = params.Pmax;
  return prob;
}

namespace {

enum class Mode {
  Main,      // t (lin + h) - logdet X - log(Pmax - h)
  PhaseOne,  // t h - logdet X
};

struct Eval {
  bool ok = false;
  double lin = 0.0;
  double h = 0.0;
  double logdet = 0.0;
  RMatrix Z;     // X^{-1}
  CMatrix Minv;  // inverse of the scaled inner matrix
};

class BarrierSolver {
 public:
  BarrierSolver(const SdpProblem& prob, const SdpOptions& opts) : prob_(prob), opts_(opts) {
    N_ = prob.N();
    K_ = prob.K();
    n1_ = N_ + 1;
    if (N_ < 1 || K_ < 1) throw DimensionMismatch("solve_relaxation: empty problem");
    Fm_ = prob.F0.topRows(N_);
    A_ = prob.G0.topLeftCorner(N_, N_);
    // Scale so the inner matrix at X = I has unit mean diagonal;
    // tr(P M^{-1}) is unchanged when both P and M are divided by c.
    const CMatrix M_identity = Fm_.adjoint() * A_.diagonal().asDiagonal() * Fm_;
    scale_ = M_identity.diagonal().real().mean();
    if (!(scale_ > 0.0) || !std::isfinite(scale_))
      throw SolverFailure("solve_relaxation: degenerate channel scale");
    A_ /= scale_;
    p_ = prob.p / scale_;

    for (Index j = 1; j < N_; ++j)
      for (Index i = 0; i < j; ++i) pairs_.push_back({i, j});
    inner_count_ = static_cast<Index>(pairs_.size());
    for (Index i = 0; i < N_; ++i) pairs_.push_back({i, N_});
    m_ = static_cast<Index>(pairs_.size());
  }

  SdpSolution solve(const std::optional<RisConfig>& hint) {
    RVector x = feasible_start(hint);
    // log det of an n1 x n1 block plus one scalar inequality.
    const double barrier_degree = static_cast<double>(n1_) + 1.0;

    Eval ev;
    evaluate(x, ev, Mode::Main);
    double t = barrier_degree / std::max({std::abs(ev.lin + ev.h), ev.h, 1e-300});
    int outer = 0;
    for (;;) {
      ++outer;
      center(x, t, Mode::Main, nullptr);
      evaluate(x, ev, Mode::Main);
      const double f = ev.lin + ev.h;
      const double gap = barrier_degree / t;
      if (gap <= opts_.rel_tol * std::max(std::abs(f), ev.h)) {
        SdpSolution sol;
        sol.X = build_X(x);
        sol.objective_value = f;
        sol.gap = gap;
        sol.lower_bound = f - gap;
        sol.trace_term = ev.h;
        sol.newton_iterations = newton_steps_;
        sol.outer_iterations = outer;
        return sol;
      }
      t *= opts_.mu;
    }
  }

 private:
  struct Pair {
    Index i;
    Index j;
  };

  RMatrix build_X(const RVector& x) const {
    RMatrix X = RMatrix::Identity(n1_, n1_);
    for (Index a = 0; a < m_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      X(i, j) = X(j, i) = x[a];
    }
    return X;
  }

  RVector pack(const RMatrix& X) const {
    RVector x(m_);
    for (Index a = 0; a < m_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      x[a] = X(i, j);
    }
    return x;
  }

  // Fills ev; ev.ok is false outside the barrier domain.
  void evaluate(const RVector& x, Eval& ev, Mode mode) const {
    ev.ok = false;
    const RMatrix X = build_X(x);
    Eigen::LLT<RMatrix> xl(X);
    if (xl.info() != Eigen::Success) return;
    const RMatrix& L = xl.matrixL();
    double logdet = 0.0;
    for (Index i = 0; i < n1_; ++i) {
      const double d = L(i, i);
      if (!(d > 0.0)) return;
      logdet += 2.0 * std::log(d);
    }
    const CMatrix B = X.topLeftCorner(N_, N_).cast<cdouble>().cwiseProduct(A_);
    const CMatrix M = Fm_.adjoint() * B * Fm_;
    Eigen::LLT<CMatrix> ml(M);
    if (ml.info() != Eigen::Success) return;
    ev.Minv = ml.solve(CMatrix::Identity(K_, K_));
    double h = 0.0;
    for (Index k = 0; k < K_; ++k) h += p_[k] * ev.Minv(k, k).real();
    if (!(h > 0.0) || !std::isfinite(h)) return;
    if (mode == Mode::Main && !(h < prob_.Pmax)) return;
    ev.h = h;
    ev.lin = -0.5 * prob_.P0 * x.tail(N_).sum();
    ev.logdet = logdet;
    ev.Z = xl.solve(RMatrix::Identity(n1_, n1_));
    ev.ok = true;
  }

  double barrier(const Eval& ev, double t, Mode mode) const {
    if (mode == Mode::Main) return t * (ev.lin + ev.h) - ev.logdet - std::log(prob_.Pmax - ev.h);
    return t * ev.h - ev.logdet;
  }

  void derivatives(const Eval& ev, double t, Mode mode, RVector& grad, RMatrix& hess) const {
    // S = M^{-1} P M^{-1}; R = Fm S Fm^H and T = Fm M^{-1} Fm^H carry all
    // first and second derivatives of h through the rank-two pieces dM/dx.
    const CMatrix S = ev.Minv * p_.cast<cdouble>().asDiagonal() * ev.Minv;
    const CMatrix R = Fm_ * S * Fm_.adjoint();
    const CMatrix T = Fm_ * ev.Minv * Fm_.adjoint();
    const RMatrix& Z = ev.Z;

    RVector gh = RVector::Zero(m_);
    for (Index a = 0; a < inner_count_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      gh[a] = -2.0 * (A_(i, j) * R(j, i)).real();
    }

    double wh = t;
    double slack = 0.0;
    if (mode == Mode::Main) {
      slack = prob_.Pmax - ev.h;
      wh = t + 1.0 / slack;
    }

    grad.resize(m_);
    for (Index a = 0; a < m_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      grad[a] = wh * gh[a] - 2.0 * Z(i, j);
    }
    if (mode == Mode::Main) grad.tail(N_).array() += t * (-0.5 * prob_.P0);

    hess.resize(m_, m_);
    for (Index a = 0; a < m_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      for (Index b = a; b < m_; ++b) {
        const auto [k, l] = pairs_[static_cast<std::size_t>(b)];
        hess(a, b) = 2.0 * (Z(i, k) * Z(j, l) + Z(i, l) * Z(j, k));
      }
    }
    for (Index a = 0; a < inner_count_; ++a) {
      const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
      const cdouble al = A_(i, j);
      const cdouble alc = std::conj(al);
      for (Index b = a; b < inner_count_; ++b) {
        const auto [k, l] = pairs_[static_cast<std::size_t>(b)];
        const cdouble be = A_(k, l);
        const cdouble bec = std::conj(be);
        const cdouble v = al * be * R(l, i) * T(j, k) + al * bec * R(k, i) * T(j, l) +
                          alc * be * R(l, j) * T(i, k) + alc * bec * R(k, j) * T(i, l);
        hess(a, b) += wh * 2.0 * v.real();
      }
    }
    if (mode == Mode::Main) {
      const double w = 1.0 / (slack * slack);
      for (Index a = 0; a < inner_count_; ++a)
        for (Index b = a; b < inner_count_; ++b) hess(a, b) += w * gh[a] * gh[b];
    }
    hess.triangularView<Eigen::StrictlyLower>() = hess.transpose().triangularView<Eigen::StrictlyLower>();
  }

  // Damped Newton on the barrier at fixed t. `stop` may end centering early.
  template <class Stop>
  void center_impl(RVector& x, double t, Mode mode, Stop&& stop) {
    Eval ev;
    Eval trial;
    RVector grad;
    RMatrix hess;
    for (;;) {
      evaluate(x, ev, mode);
      if (!ev.ok) throw SolverFailure("solve_relaxation: iterate left the barrier domain");
      if (stop(ev)) return;
      if (++newton_steps_ > opts_.max_newton) {
        std::ostringstream os;
        os << "solve_relaxation: Newton budget of " << opts_.max_newton << " steps exhausted";
        throw SolverFailure(os.str());
      }
      derivatives(ev, t, mode, grad, hess);
      Eigen::LLT<RMatrix> hl(hess);
      RVector dx;
      if (hl.info() == Eigen::Success) {
        dx = -hl.solve(grad);
      } else {
        Eigen::LDLT<RMatrix> hd(hess);
        if (hd.info() != Eigen::Success) throw SolverFailure("solve_relaxation: singular Newton system");
        dx = -hd.solve(grad);
      }
      if (!dx.allFinite()) throw SolverFailure("solve_relaxation: non-finite Newton step");
      const double slope = grad.dot(dx);
      const double decrement = -slope;
      if (decrement / 2.0 <= opts_.newton_tol) return;

      const double phi = barrier(ev, t, mode);
      double step = 1.0;
      bool moved = false;
      while (step > 1e-14) {
        evaluate(x + step * dx, trial, mode);
        if (trial.ok) {
          const double next = barrier(trial, t, mode);
          if (next <= phi + 0.25 * step * slope + 1e-13 * std::abs(phi)) {
            moved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!moved) return;  // round-off floor reached
      x += step * dx;
    }
  }

  void center(RVector& x, double t, Mode mode, const double* phase_one_target) {
    if (phase_one_target) {
      const double target = *phase_one_target;
      center_impl(x, t, mode, [&](const Eval& ev) { return ev.h < target; });
    } else {
      center_impl(x, t, mode, [](const Eval&) { return false; });
    }
  }

  bool strictly_feasible(const RVector& x) const {
    Eval ev;
    evaluate(x, ev, Mode::Main);
    return ev.ok;
  }

  RVector feasible_start(const std::optional<RisConfig>& hint) {
    RVector x = RVector::Zero(m_);
    if (strictly_feasible(x)) return x;

    // Walk from X = I toward a rank-one lifted point: the hint first, then
    // the all-ones matrix (every element OFF).
    std::vector<RVector> targets;
    if (hint && hint->size() == N_) targets.push_back(pack(lift(*hint)));
    targets.push_back(RVector::Ones(m_));
    for (const RVector& target : targets) {
      double w = 0.5;
      for (int k = 0; k < 40; ++k, w = 1.0 - 0.5 * (1.0 - w)) {
        RVector cand = w * target;
        if (strictly_feasible(cand)) return cand;
      }
    }

    // Phase one: minimize h alone until it drops below Pmax.
    Eval ev;
    evaluate(x, ev, Mode::PhaseOne);
    if (!ev.ok) throw SolverFailure("solve_relaxation: inner matrix singular at X = I");
    const double target = prob_.Pmax * (1.0 - 1e-9);
    double t = static_cast<double>(n1_) / ev.h;
    for (;;) {
      center(x, t, Mode::PhaseOne, &target);
      evaluate(x, ev, Mode::PhaseOne);
      if (ev.h < target && strictly_feasible(x)) return x;
      // Centered point is within n1/t of the minimum of h.
      if (ev.h - static_cast<double>(n1_) / t >= prob_.Pmax) {
        std::ostringstream os;
        os << "relaxation infeasible: min transmit power exceeds " << prob_.Pmax << " W";
        throw RelaxationInfeasible(os.str());
      }
      if (static_cast<double>(n1_) / t < 1e-12 * ev.h) {
        throw RelaxationInfeasible("relaxation infeasible: power budget met only with zero margin");
      }
      t *= opts_.mu;
    }
  }

  const SdpProblem& prob_;
  SdpOptions opts_;
  Index N_ = 0, K_ = 0, n1_ = 0, m_ = 0, inner_count_ = 0;
  CMatrix Fm_;
  CMatrix A_;
  RVector p_;
  double scale_ = 1.0;
  std::vector<Pair> pairs_;
  int newton_steps_ = 0;
};

}  // namespace

SdpSolution solve_relaxation(const SdpProblem& prob, const SdpOptions& opts,
                             const std::optional<RisConfig>& hint) {
  if (prob.p.size() != prob.K()) throw DimensionMismatch("solve_relaxation: p length differs from K");
  for (Index k = 0; k < prob.p.size(); ++k)
    if (!(prob.p[k] > 0.0)) throw Error("solve_relaxation: P must be positive definite");
  BarrierSolver solver(prob, opts);
  return solver.solve(hint);
}

RoundingOutcome round_solution(const SdpSolution& sol, const SdpProblem& prob,
                               const ChannelRealization& chan, const RVector& p, int n_rounds,
                               std::uint64_t seed, double cond_cap) {
  const Index N = prob.N();
  if (sol.X.rows() != N + 1 || chan.N() != N) throw DimensionMismatch("round_solution: size mismatch");
  if (n_rounds < 1) throw Error("round_solution: n_rounds must be positive");

  Eigen::SelfAdjointEigenSolver<RMatrix> es(sol.X.topLeftCorner(N, N));
  if (es.info() != Eigen::Success) throw SolverFailure("round_solution: eigendecomposition failed");
  RVector lam = es.eigenvalues();
  if (lam.minCoeff() < -kEigenClip) {
    std::ostringstream os;
    os << "round_solution: relaxed solution has eigenvalue " << lam.minCoeff();
    throw SolverFailure(os.str());
  }
  lam = lam.cwiseMax(0.0);
  // v_n^T u = (Q Lambda^{1/2} u)_n for V = Lambda^{1/2} Q^T.
  const RMatrix QL = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();

  const RisCostParams params{prob.P0, prob.Pmax, cond_cap};
  RoundingOutcome out;
  bool found = false;
  RVector u(N);
  for (int r = 0; r < n_rounds; ++r) {
    auto gen = substream(seed, Stream::Rounding, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> nd(0.0, 1.0);
    for (Index n = 0; n < N; ++n) u[n] = nd(gen);
    u /= u.norm();
    const RVector y = QL * u;
    RVector q(N);
    for (Index n = 0; n < N; ++n) q[n] = y[n] >= 0.0 ? 1.0 : -1.0;
    for (const RisConfig& cand : {RisConfig(q), RisConfig(RVector(-q))}) {
      const PowerCost cost = evaluate_cost(chan, p, cand, params);
      if (!cost.feasible) continue;
      ++out.feasible_candidates;
      if (!found || cost.g < out.g || (cost.g == out.g && cand.lexicographically_less(out.ris))) {
        out.ris = cand;
        out.g = cost.g;
        found = true;
      }
    }
  }
  if (!found) throw NoFeasibleRounding("round_solution: every rounded candidate violates the power budget");
  return out;
}

}  // namespace risee
