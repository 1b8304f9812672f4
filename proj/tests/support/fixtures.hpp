// SPDX-License-Identifier: Apache-2.0
//
// Scenario builders shared by the unit and acceptance tests.
#pragma once

#include <cstdint>

#include "risee/baselines.hpp"
#include "risee/channel.hpp"
#include "risee/power_alloc.hpp"

namespace fixtures {

// 4x2 RIS, 4 BS antennas, 2 users.
inline risee::SystemConfig small_config() {
  risee::SystemConfig cfg;
  cfg.M1 = 4;
  cfg.M2 = 1;
  cfg.N1 = 4;
  cfg.N2 = 2;
  cfg.K = 2;
  return cfg;
}

inline risee::SystemConfig sized_config(int n1, int n2, int m, int k) {
  risee::SystemConfig cfg;
  cfg.M1 = m;
  cfg.M2 = 1;
  cfg.N1 = n1;
  cfg.N2 = n2;
  cfg.K = k;
  return cfg;
}

struct Instance {
  risee::SystemConfig cfg;
  risee::ChannelRealization chan;
  risee::RVector p;  // Dinkelbach allocation at all +1
  risee::RisCostParams params;
};

inline Instance instance(const risee::SystemConfig& cfg, std::uint64_t seed) {
  Instance in;
  in.cfg = cfg;
  in.chan = risee::draw_channel(cfg, seed);
  const auto q0 = risee::all_off_ris(cfg.N());
  const auto t = risee::t_coefficients(risee::effective_channel(in.chan, q0), cfg.cond_cap);
  in.p = risee::dinkelbach(risee::make_alloc_problem(cfg, t, 0)).p;
  in.params = risee::RisCostParams::from(cfg);
  return in;
}

}  // namespace fixtures
