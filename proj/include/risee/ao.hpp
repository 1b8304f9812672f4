// SPDX-License-Identifier: Apache-2.0
//
// Alternating optimization: a power-allocation step (Dinkelbach for the
// current RIS state) followed by an RIS step (the selected method with p
// fixed), repeated until the EE gain of a full iteration falls below
// rel_ee_tol. An RIS proposal is accepted only if it is feasible and does
// not lower EE, so the half-step EE trace is nondecreasing.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "risee/ris_gradient.hpp"
#include "risee/ris_sdp.hpp"

namespace risee {

enum class Method { Gradient, Sdp, Random, AllOff, Successive };

std::string to_string(Method method);
// Accepts "gradient", "sdp", "random", "all_off", "successive". Throws ConfigError.
Method parse_method(std::string_view name);

enum class InitialPolicy {
  AllOff,          // q = all +1
  Random,          // seeded uniform draw
  BestOfRestarts,  // highest-EE feasible of {all +1, all -1, random draws}
};

struct AoOptions {
  Method method = Method::Gradient;
  int max_ao_iters = 20;
  double rel_ee_tol = 1e-6;
  InitialPolicy initial = InitialPolicy::AllOff;
  std::uint64_t seed = 0;
  GradSearchParams grad;
  SdpOptions sdp;
  int sdp_rounds = 100;
  int max_sweeps = 50;
  int restarts = 10;
  // Overrides the initial policy for the search methods when set.
  std::optional<RisConfig> start;
};

// Throws NoFeasibleStart when no starting RIS state admits a feasible
// allocation; solver errors from an RIS step are rethrown with the step named.
EEReport run_ao(const SystemConfig& cfg, const ChannelRealization& chan, const AoOptions& opts);

}  // namespace risee
