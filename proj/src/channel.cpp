// SPDX-License-Identifier: Apache-2.0
#include "risee/channel.hpp"

#include <cmath>

#include "risee/rng.hpp"

namespace risee {

namespace {

using std::numbers::pi;

LinkAngles draw_angles(const SystemConfig& cfg, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> az(cfg.az_min, cfg.az_max);
  std::uniform_real_distribution<double> el(cfg.el_min, cfg.el_max);
  LinkAngles a;
  a.theta = az(gen);
  a.phi = el(gen);
  return a;
}

// i.i.d. CN(0, 1) entries.
CMatrix complex_gaussian(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = nd(gen);
      const double im = nd(gen);
      out(r, c) = cdouble(re, im);
    }
  return out;
}

}  // namespace

CVector steering_vector(int n1, int n2, double theta, double phi) {
  const double h_phase = pi * std::sin(theta) * std::sin(phi);
  const double v_phase = pi * std::cos(phi);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n1) * n2);
  CVector a(static_cast<Index>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      a[static_cast<Index>(i) * n2 + j] = scale * std::polar(1.0, i * h_phase + j * v_phase);
  return a;
}

double path_loss_db(const SystemConfig& cfg, double distance_m) {
  return cfg.pl0_dB + 10.0 * cfg.pl_exp * std::log10(distance_m);
}

double path_loss_amplitude(const SystemConfig& cfg, double distance_m) {
  return std::pow(10.0, -path_loss_db(cfg, distance_m) / 20.0);
}

ChannelRealization draw_channel(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Index N = cfg.N();
  const Index M = cfg.M();
  const Index K = cfg.K;
  const double los = std::sqrt(cfg.kappa / (cfg.kappa + 1.0));
  const double nlos = std::sqrt(1.0 / (cfg.kappa + 1.0));

  ChannelRealization chan;
  chan.seed = seed;

  {
    auto gen = substream(seed, Stream::BsLinkAngles);
    chan.g_ris = draw_angles(cfg, gen);
    chan.g_bs = draw_angles(cfg, gen);
    auto noise = substream(seed, Stream::BsLinkNlos);
    const CVector aN = steering_vector(cfg.N1, cfg.N2, chan.g_ris.theta, chan.g_ris.phi);
    const CVector aM = steering_vector(cfg.M1, cfg.M2, chan.g_bs.theta, chan.g_bs.phi);
    const CMatrix G_los = std::sqrt(static_cast<double>(N * M)) * aN * aM.adjoint();
    const double z = path_loss_amplitude(cfg, cfg.d_BS);
    chan.G = z * (los * G_los + nlos * complex_gaussian(N, M, noise));
  }

  chan.F.resize(N, K);
  chan.users.resize(static_cast<std::size_t>(K));
  const double z = path_loss_amplitude(cfg, cfg.d_UE);
  for (Index k = 0; k < K; ++k) {
    auto gen = substream(seed, Stream::UserAngles, static_cast<std::uint64_t>(k));
    auto noise = substream(seed, Stream::UserNlos, static_cast<std::uint64_t>(k));
    const LinkAngles ang = draw_angles(cfg, gen);
    chan.users[static_cast<std::size_t>(k)] = ang;
    const CVector f_los =
        std::sqrt(static_cast<double>(N)) * steering_vector(cfg.N1, cfg.N2, ang.theta, ang.phi);
    chan.F.col(k) = z * (los * f_los + nlos * complex_gaussian(N, 1, noise).col(0));
  }
  return chan;
}

}  // namespace risee
