// SPDX-License-Identifier: Apache-2.0
#include "risee/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

namespace risee {

Stage parse_stage(std::string_view name) {
  for (Stage s : {Stage::PStep, Stage::ThetaStep, Stage::Final})
    if (name == to_string(s)) return s;
  throw Error("unknown stage '" + std::string(name) + "'");
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string format_row(const ResultRow& r) {
  std::string s;
  s.reserve(160);
  s += std::to_string(r.seed);
  s += ',';
  s += format_double(r.axis_value);
  s += ',';
  s += r.method;
  s += ',';
  s += std::to_string(r.ao_iteration);
  s += ',';
  s += to_string(r.stage);
  s += ',';
  s += format_double(r.se);
  s += ',';
  s += format_double(r.ee);
  s += ',';
  s += format_double(r.tx_power_w);
  s += ',';
  s += std::to_string(r.on_count);
  s += ',';
  if (r.runtime_ms) s += format_double(*r.runtime_ms);
  s += ',';
  s += r.feasible ? '1' : '0';
  return s;
}

namespace {

template <class T>
T parse_number(std::string_view field, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw Error(std::string("csv: bad ") + what + " '" + std::string(field) + "'");
  return v;
}

}  // namespace

ResultRow parse_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::array<std::string_view, 11> f;
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (n == f.size()) throw Error("csv: too many fields");
    f[n++] = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (n != f.size()) throw Error("csv: expected 11 fields, got " + std::to_string(n));

  ResultRow r;
  r.seed = parse_number<std::uint64_t>(f[0], "seed");
  r.axis_value = parse_number<double>(f[1], "axis_value");
  r.method = std::string(f[2]);
  r.ao_iteration = parse_number<int>(f[3], "ao_iteration");
  r.stage = parse_stage(f[4]);
  r.se = parse_number<double>(f[5], "se");
  r.ee = parse_number<double>(f[6], "ee");
  r.tx_power_w = parse_number<double>(f[7], "tx_power_w");
  r.on_count = parse_number<int>(f[8], "on_count");
  if (!f[9].empty()) r.runtime_ms = parse_number<double>(f[9], "runtime_ms");
  if (f[10] != "0" && f[10] != "1") throw Error("csv: bad feasible '" + std::string(f[10]) + "'");
  r.feasible = f[10] == "1";
  return r;
}

std::vector<ResultRow> rows_from_report(const EEReport& report, std::uint64_t seed, double axis_value,
                                        const std::string& method, std::optional<double> runtime_ms) {
  std::vector<ResultRow> rows;
  rows.reserve(report.trace.size() + 1);
  for (const auto& tp : report.trace) {
    ResultRow r;
    r.seed = seed;
    r.axis_value = axis_value;
    r.method = method;
    r.ao_iteration = tp.iteration;
    r.stage = tp.stage;
    r.se = tp.se;
    r.ee = tp.ee;
    r.tx_power_w = tp.tx_power;
    r.on_count = tp.on_count;
    r.feasible = true;
    rows.push_back(std::move(r));
  }
  ResultRow fin;
  fin.seed = seed;
  fin.axis_value = axis_value;
  fin.method = method;
  fin.ao_iteration = report.ao_iterations;
  fin.stage = Stage::Final;
  fin.se = report.se;
  fin.ee = report.ee;
  fin.tx_power_w = report.tx_power;
  fin.on_count = report.on_count;
  fin.runtime_ms = runtime_ms;
  fin.feasible = report.feasible;
  rows.push_back(std::move(fin));
  return rows;
}

ResultRow failure_row(std::uint64_t seed, double axis_value, const std::string& method) {
  ResultRow r;
  r.seed = seed;
  r.axis_value = axis_value;
  r.method = method;
  r.stage = Stage::Final;
  r.feasible = false;
  return r;
}

void write_preamble(std::ostream& out) { out << kCsvVersionLine << '\n' << kCsvHeader << '\n'; }

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || (line != kCsvVersionLine && line != std::string(kCsvVersionLine) + "\r"))
    throw Error("csv: missing or unsupported version line (expected '" + std::string(kCsvVersionLine) + "')");
  if (!std::getline(in, line)) throw Error("csv: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error("csv: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_row(line));
  }
  return rows;
}

}  // namespace risee
