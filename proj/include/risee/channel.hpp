// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "risee/model.hpp"

namespace risee {

// Uniform planar array response with half-wavelength spacing:
//   a = (h ⊗ v) / sqrt(n1 n2),
//   h_i = exp(j pi i sin(theta) sin(phi)),  v_j = exp(j pi j cos(phi)).
CVector steering_vector(int n1, int n2, double theta, double phi);

// PL(d) = pl0_dB + 10 pl_exp log10(d) in dB.
double path_loss_db(const SystemConfig& cfg, double distance_m);
// Amplitude factor z = 10^(-PL/20).
double path_loss_amplitude(const SystemConfig& cfg, double distance_m);

// Rician draw: X = z (sqrt(k/(k+1)) X_LoS + sqrt(1/(k+1)) X_NLoS).
// G gets one angle draw; every user column of F gets its own. Pure in (cfg, seed).
ChannelRealization draw_channel(const SystemConfig& cfg, std::uint64_t seed);

}  // namespace risee
