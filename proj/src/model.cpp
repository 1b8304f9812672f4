// SPDX-License-Identifier: Apache-2.0
#include "risee/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace risee {

double SystemConfig::sigma2() const { return BW * std::pow(10.0, (n0 - 30.0) / 10.0); }

double SystemConfig::p_min() const { return sigma2() * (std::exp2(SE_min) - 1.0); }

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (M1 < 1 || M2 < 1) fail("M1 and M2 must be positive");
  if (N1 < 1 || N2 < 1) fail("N1 and N2 must be positive");
  if (K < 1) fail("K must be positive");
  if (K > std::min(M(), N())) {
    std::ostringstream os;
    os << "K=" << K << " exceeds min(M, N)=" << std::min(M(), N())
       << " (zero-forcing needs K <= min(M, N))";
    fail(os.str());
  }
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and > 0");
  };
  positive(P_static, "P_static");
  positive(Pmax, "Pmax");
  positive(BW, "BW");
  positive(fc, "fc");
  positive(d_BS, "d_BS");
  positive(d_UE, "d_UE");
  positive(cond_cap, "cond_cap");
  if (!(P0 >= 0.0) || !std::isfinite(P0)) fail("P0 must be finite and >= 0");
  if (!(nu > 0.0 && nu <= 1.0)) fail("nu must lie in (0, 1]");
  if (!(SE_min >= 0.0) || !std::isfinite(SE_min)) fail("SE_min must be >= 0");
  if (!(kappa >= 0.0)) fail("kappa must be >= 0");
  if (!std::isfinite(n0) || !std::isfinite(pl0_dB) || !std::isfinite(pl_exp))
    fail("n0, pl0_dB and pl_exp must be finite");
  if (!(az_min <= az_max)) fail("az_min must not exceed az_max");
  if (!(el_min <= el_max)) fail("el_min must not exceed el_max");
}

RisConfig::RisConfig(RVector q) : q_(std::move(q)) {
  for (Index n = 0; n < q_.size(); ++n) {
    if (q_[n] != 1.0 && q_[n] != -1.0) {
      std::ostringstream os;
      os << "RIS entry " << n << " is " << q_[n] << ", expected +1 or -1";
      throw Error(os.str());
    }
  }
}

RisConfig RisConfig::all(Index n, double value) {
  return RisConfig(RVector::Constant(n, value));
}

RisConfig RisConfig::flipped(Index n) const {
  RisConfig out = *this;
  out.flip(n);
  return out;
}

int RisConfig::on_count() const {
  int on = 0;
  for (Index n = 0; n < q_.size(); ++n) on += q_[n] < 0.0 ? 1 : 0;
  return on;
}

RVector RisConfig::phases() const {
  return (std::numbers::pi / 2) * (RVector::Ones(q_.size()) - q_);
}

bool RisConfig::lexicographically_less(const RisConfig& other) const {
  return std::lexicographical_compare(q_.data(), q_.data() + q_.size(), other.q_.data(),
                                      other.q_.data() + other.q_.size());
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::PStep: return "p_step";
    case Stage::ThetaStep: return "theta_step";
    case Stage::Final: return "final";
  }
  return "unknown";
}

CMatrix effective_channel(const ChannelRealization& chan, const RVector& q) {
  if (chan.F.rows() != chan.G.rows() || q.size() != chan.G.rows()) {
    std::ostringstream os;
    os << "effective_channel: G is " << chan.G.rows() << "x" << chan.G.cols() << ", F is "
       << chan.F.rows() << "x" << chan.F.cols() << ", q has " << q.size() << " entries";
    throw DimensionMismatch(os.str());
  }
  return chan.F.adjoint() * (q.asDiagonal() * chan.G);
}

CMatrix effective_channel(const ChannelRealization& chan, const RisConfig& ris) {
  return effective_channel(chan, ris.q());
}

CMatrix gram(const CMatrix& Hh) { return Hh * Hh.adjoint(); }

namespace {

// Lower Cholesky factor of H^H H with the singularity policy applied.
Eigen::LLT<CMatrix> checked_factor(const CMatrix& Hh, double cond_cap) {
  if (Hh.rows() == 0) throw DimensionMismatch("empty cascade channel");
  if (Hh.rows() > Hh.cols()) throw SingularChannel("more users than BS antennas");
  CMatrix A = gram(Hh);
  Eigen::LLT<CMatrix> llt(A);
  if (llt.info() != Eigen::Success) throw SingularChannel("H^H H is not positive definite");
  const double rcond = llt.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > cond_cap) {
    std::ostringstream os;
    os << "H^H H condition estimate " << (rcond > 0.0 ? 1.0 / rcond : INFINITY)
       << " exceeds cap " << cond_cap;
    throw SingularChannel(os.str());
  }
  return llt;
}

}  // namespace

RVector t_coefficients(const CMatrix& Hh, double cond_cap) {
  const auto llt = checked_factor(Hh, cond_cap);
  // (LL^H)^{-1} = L^{-H} L^{-1}, so t_k is the squared norm of column k of L^{-1}.
  const Index K = Hh.rows();
  CMatrix Linv = CMatrix::Identity(K, K);
  llt.matrixL().solveInPlace(Linv);
  return Linv.colwise().squaredNorm().transpose();
}

CMatrix zf_precoder(const CMatrix& Hh, const RVector& p, double cond_cap) {
  if (p.size() != Hh.rows()) throw DimensionMismatch("zf_precoder: p length differs from K");
  const auto llt = checked_factor(Hh, cond_cap);
  CMatrix sqrtP = p.cwiseSqrt().cast<cdouble>().asDiagonal();
  return Hh.adjoint() * llt.solve(sqrtP);
}

double spectral_efficiency(const RVector& p, double sigma2) {
  double se = 0.0;
  for (Index k = 0; k < p.size(); ++k) se += std::log2(1.0 + p[k] / sigma2);
  return se;
}

EEReport metrics(const SystemConfig& cfg, const RisConfig& ris, const RVector& p,
                 const RVector& t) {
  if (p.size() != t.size()) throw DimensionMismatch("metrics: p and t lengths differ");
  EEReport r;
  r.ris = ris;
  r.p = p;
  r.on_count = ris.on_count();
  r.se = spectral_efficiency(p, cfg.sigma2());
  r.tx_power = p.dot(t);
  const double denom = cfg.P_static + cfg.P0 * r.on_count + r.tx_power / cfg.nu;
  r.ee = cfg.BW * r.se / denom;
  const double pmin = cfg.p_min();
  r.feasible = r.tx_power <= cfg.Pmax + kPowerSlack &&
               (p.array() >= pmin * (1.0 - 1e-12)).all();
  return r;
}

}  // namespace risee
