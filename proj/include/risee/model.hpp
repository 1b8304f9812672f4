// SPDX-License-Identifier: Apache-2.0
//
// Shared domain types and the deterministic model arithmetic for a 1-bit
// RIS-assisted multi-user MISO downlink with zero-forcing precoding.
//
// Conventions:
//   G  : N x M complex, RIS <- BS channel
//   F  : N x K complex, column k is the RIS -> user k channel f_k
//   q  : RIS state in {-1,+1}^N, Theta = diag(q)
//   Hh : K x M cascade channel F^H diag(q) G (the "H^H" of the ZF formulas)
//
// An element is ON (dissipates P0) when its phase is pi, i.e. q_n = -1.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "risee/errors.hpp"

namespace risee {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Slack used everywhere a transmit power is compared against Pmax.
inline constexpr double kPowerSlack = 1e-9;

// Scenario constants. Defaults: 8x8 RIS, 8 BS antennas, 4 users,
// 10 W static power, 10 mW per ON element.
struct SystemConfig {
  int M1 = 8;  // BS array, horizontal
  int M2 = 1;  // BS array, vertical
  int N1 = 8;  // RIS, horizontal
  int N2 = 8;  // RIS, vertical
  int K = 4;   // users

  double P_static = 10.0;                   // W
  double P0 = 10e-3;                        // W per ON element
  double Pmax = 3.1622776601683795;         // W (5 dBW)
  double nu = 1.0;                          // amplifier efficiency
  double SE_min = 1e-4;                     // bits/s/Hz per user
  double BW = 180e3;                        // Hz
  double n0 = -174.0;                       // dBm/Hz
  double fc = 3.5e9;                        // Hz (record only)
  double d_BS = 200.0;                      // m
  double d_UE = 200.0;                      // m
  double kappa = 10.0;                      // Rician factor, linear
  double pl0_dB = 30.0;                     // path loss at 1 m
  double pl_exp = 2.2;                      // path-loss exponent

  double az_min = -std::numbers::pi / 2;
  double az_max = std::numbers::pi / 2;
  double el_min = std::numbers::pi / 3;
  double el_max = 2 * std::numbers::pi / 3;

  double cond_cap = 1e12;  // condition-number cap for H^H H

  int M() const { return M1 * M2; }
  int N() const { return N1 * N2; }

  // Noise power in watts: BW * 10^((n0 - 30)/10).
  double sigma2() const;
  // Per-user received power floor sigma2 * (2^SE_min - 1).
  double p_min() const;

  // Throws ConfigError on any invariant violation, including K > min(M, N).
  void validate() const;
};

struct LinkAngles {
  double theta = 0.0;  // azimuth
  double phi = 0.0;    // elevation
};

// One draw of the RIS-BS and RIS-user channels. H is always derived.
struct ChannelRealization {
  CMatrix G;  // N x M
  CMatrix F;  // N x K
  std::uint64_t seed = 0;
  LinkAngles g_ris;                 // RIS-side angles of the BS link
  LinkAngles g_bs;                  // BS-side angles of the BS link
  std::vector<LinkAngles> users;    // RIS-side angles per user

  Index N() const { return G.rows(); }
  Index M() const { return G.cols(); }
  Index K() const { return F.cols(); }
};

// Binary RIS state q in {-1,+1}^N.
class RisConfig {
 public:
  RisConfig() = default;
  explicit RisConfig(RVector q);
  static RisConfig all(Index n, double value);

  const RVector& q() const { return q_; }
  Index size() const { return q_.size(); }
  double operator[](Index n) const { return q_[n]; }

  void flip(Index n) { q_[n] = -q_[n]; }
  RisConfig flipped(Index n) const;

  // Number of elements with phase pi: (N - sum q) / 2.
  int on_count() const;
  // theta_n = pi (1 - q_n) / 2.
  RVector phases() const;

  // Lexicographic order with -1 < +1.
  bool lexicographically_less(const RisConfig& other) const;

  bool operator==(const RisConfig& other) const { return q_ == other.q_; }

 private:
  RVector q_;
};

struct PowerAllocation {
  RVector p;                         // received powers, W
  std::vector<double> lambda_trace;  // Dinkelbach ratios, bits/s/Hz per W
  int iterations = 0;

  double lambda() const { return lambda_trace.empty() ? 0.0 : lambda_trace.back(); }
};

enum class Stage { PStep, ThetaStep, Final };

std::string to_string(Stage stage);

struct TracePoint {
  int iteration = 0;
  Stage stage = Stage::PStep;
  double se = 0.0;
  double ee = 0.0;
  double tx_power = 0.0;
  int on_count = 0;
};

struct EEReport {
  double se = 0.0;        // bits/s/Hz
  double ee = 0.0;        // bits/Joule
  double tx_power = 0.0;  // W
  int on_count = 0;
  bool feasible = false;
  std::vector<TracePoint> trace;

  RisConfig ris;
  RVector p;
  int ao_iterations = 0;
  bool converged = false;
};

// F^H diag(q) G, K x M.
CMatrix effective_channel(const ChannelRealization& chan, const RisConfig& ris);
CMatrix effective_channel(const ChannelRealization& chan, const RVector& q);

// H^H H = Hh Hh^H, K x K Hermitian.
CMatrix gram(const CMatrix& Hh);

// t_k = [(H^H H)^{-1}]_kk. Throws SingularChannel when the Cholesky
// factorization fails or the condition estimate exceeds cond_cap.
RVector t_coefficients(const CMatrix& Hh, double cond_cap = 1e12);

// W = H (H^H H)^{-1} P^{1/2}, M x K.
CMatrix zf_precoder(const CMatrix& Hh, const RVector& p, double cond_cap = 1e12);

double spectral_efficiency(const RVector& p, double sigma2);

// SE/EE bookkeeping for a fixed allocation; t supplies the transmit cost.
EEReport metrics(const SystemConfig& cfg, const RisConfig& ris, const RVector& p,
                 const RVector& t);

}  // namespace risee
