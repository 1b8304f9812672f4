// SPDX-License-Identifier: Apache-2.0
//
// Versioned result CSV. Layout:
//   # ris-ee-lab v1
//   seed,axis_value,method,ao_iteration,stage,se,ee,tx_power_w,on_count,runtime_ms,feasible
// Floating-point fields use the shortest round-trip representation.
// runtime_ms is left empty unless timing was requested.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risee/model.hpp"

namespace risee {

inline constexpr std::string_view kCsvVersionLine = "# ris-ee-lab v1";
inline constexpr std::string_view kCsvHeader =
    "seed,axis_value,method,ao_iteration,stage,se,ee,tx_power_w,on_count,runtime_ms,feasible";

struct ResultRow {
  std::uint64_t seed = 0;
  double axis_value = 0.0;
  std::string method;
  int ao_iteration = 0;
  Stage stage = Stage::Final;
  double se = 0.0;
  double ee = 0.0;
  double tx_power_w = 0.0;
  int on_count = 0;
  std::optional<double> runtime_ms;
  bool feasible = false;
};

Stage parse_stage(std::string_view name);

std::string format_double(double v);
std::string format_row(const ResultRow& row);
// Throws Error on malformed input.
ResultRow parse_row(std::string_view line);

// Trace rows (p_step, theta_step per iteration) followed by one final row.
std::vector<ResultRow> rows_from_report(const EEReport& report, std::uint64_t seed, double axis_value,
                                        const std::string& method,
                                        std::optional<double> runtime_ms = std::nullopt);

// A single feasible=false final row for a failed cell.
ResultRow failure_row(std::uint64_t seed, double axis_value, const std::string& method);

void write_preamble(std::ostream& out);

// Checks the version line and header, then parses every row.
std::vector<ResultRow> read_csv(std::istream& in);

}  // namespace risee
