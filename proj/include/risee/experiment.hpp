// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness behind the ris-ee-lab CLI: single runs, Monte Carlo
// sweeps over Pmax or RIS size, and exhaustive-oracle rows.
#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "risee/ao.hpp"
#include "risee/baselines.hpp"
#include "risee/csv.hpp"

namespace risee {

inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
inline double watts_to_dbw(double w) { return 10.0 * std::log10(w); }

struct RunOptions {
  int max_ao_iters = 20;
  int sdp_rounds = 100;
  bool timing = false;  // fill runtime_ms (breaks byte-determinism)
};

AoOptions make_ao_options(Method method, std::uint64_t seed, const RunOptions& run);

struct RunResult {
  EEReport report;
  std::vector<ResultRow> rows;
};

// Draws the channel for `seed`, runs AO with `method` and emits the trace
// rows plus a final row. Errors propagate.
RunResult cmd_run(const SystemConfig& cfg, Method method, std::uint64_t seed, double axis_value,
                  const RunOptions& run = {});

enum class SweepAxis { PmaxDbw, RisElements };

struct SweepSpec {
  SweepAxis axis = SweepAxis::PmaxDbw;
  std::vector<double> values;   // dBW, or element counts (perfect squares)
  std::vector<Method> methods;
  int num_seeds = 1;
  std::uint64_t seed_base = 0;  // seeds seed_base .. seed_base + num_seeds - 1
  std::string output_path;      // "-" writes to stdout
  bool resume = false;
  int threads = 0;              // 0: hardware concurrency; RIS_EE_THREADS caps
  RunOptions run;

  // Throws ConfigError.
  void validate() const;
};

// Base config with the swept quantity applied. Element counts must be
// perfect squares and map to an n x n RIS.
SystemConfig config_for_value(const SystemConfig& base, SweepAxis axis, double value);

int resolve_threads(int requested, std::size_t cells);

struct SweepSummary {
  std::size_t cells = 0;
  std::size_t computed = 0;
  std::size_t resumed = 0;
  std::size_t failed = 0;
};

// Rows appear in canonical order (value ascending, seed ascending, methods
// in the given order) regardless of scheduling and are flushed cell by cell.
// With resume, complete cells already present in output_path are kept.
SweepSummary cmd_sweep(const SweepSpec& spec, const SystemConfig& base);

enum class OracleMode { G, EE };

struct OracleRun {
  OracleResult result;
  ResultRow row;
};

// Mode G fixes p to the Dinkelbach allocation at all +1 and minimizes g;
// mode EE maximizes EE jointly. Throws CapExceeded / AllInfeasible.
OracleRun cmd_oracle(const SystemConfig& cfg, std::uint64_t seed, OracleMode mode, double axis_value);

// 0 success, 1 usage/config, 2 infeasible/cap, 3 solver failure.
int exit_code_for(const std::exception& e);

}  // namespace risee
