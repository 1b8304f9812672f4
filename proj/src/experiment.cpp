// SPDX-License-Identifier: Apache-2.0
#include "risee/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "risee/channel.hpp"
#include "risee/power_alloc.hpp"

namespace risee {

AoOptions make_ao_options(Method method, std::uint64_t seed, const RunOptions& run) {
  AoOptions opts;
  opts.method = method;
  opts.seed = seed;
  opts.max_ao_iters = run.max_ao_iters;
  opts.sdp_rounds = run.sdp_rounds;
  return opts;
}

RunResult cmd_run(const SystemConfig& cfg, Method method, std::uint64_t seed, double axis_value,
                  const RunOptions& run) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ChannelRealization chan = draw_channel(cfg, seed);
  RunResult out;
  out.report = run_ao(cfg, chan, make_ao_options(method, seed, run));
  std::optional<double> runtime;
  if (run.timing)
    runtime = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.rows = rows_from_report(out.report, seed, axis_value, to_string(method), runtime);
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep: no values given");
  if (methods.empty()) throw ConfigError("sweep: no methods given");
  if (num_seeds < 1) throw ConfigError("sweep: --seeds must be at least 1");
  if (output_path.empty()) throw ConfigError("sweep: output path is empty");
  if (resume && output_path == "-") throw ConfigError("sweep: --resume needs a file output");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("sweep: non-finite value");
}

SystemConfig config_for_value(const SystemConfig& base, SweepAxis axis, double value) {
  SystemConfig cfg = base;
  if (axis == SweepAxis::PmaxDbw) {
    cfg.Pmax = dbw_to_watts(value);
  } else {
    const long n = std::lround(value);
    const long side = std::lround(std::sqrt(static_cast<double>(n)));
    if (static_cast<double>(n) != value || n < 1 || side * side != n)
      throw ConfigError("element count " + format_double(value) + " is not a perfect square");
    cfg.N1 = static_cast<int>(side);
    cfg.N2 = static_cast<int>(side);
  }
  cfg.validate();
  return cfg;
}

int resolve_threads(int requested, std::size_t cells) {
  int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RIS_EE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
  }
  n = std::min<long>(n, static_cast<long>(std::max<std::size_t>(cells, 1)));
  return std::max(n, 1);
}

namespace {

struct Cell {
  double value = 0.0;
  std::uint64_t seed = 0;
  Method method = Method::Gradient;
};

using CellKey = std::tuple<std::uint64_t, std::string, std::string>;

CellKey key_of(std::uint64_t seed, double value, const std::string& method) {
  return {seed, format_double(value), method};
}

// Complete cells from a previous (possibly truncated) output.
std::map<CellKey, std::string> load_completed(const std::string& path) {
  std::map<CellKey, std::string> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  if (line != kCsvVersionLine) throw Error("resume: '" + path + "' has an unsupported version line");
  if (!std::getline(in, line) || line != kCsvHeader) throw Error("resume: '" + path + "' has an unexpected header");
  std::string block;
  std::optional<CellKey> current;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // last line without newline may be partial
    ResultRow row;
    try {
      row = parse_row(line);
    } catch (const Error&) {
      break;
    }
    const CellKey k = key_of(row.seed, row.axis_value, row.method);
    if (!current || *current != k) {
      block.clear();
      current = k;
    }
    block += line;
    block += '\n';
    if (row.stage == Stage::Final) {
      done[k] = block;
      block.clear();
      current.reset();
    }
  }
  return done;
}

std::string render(const std::vector<ResultRow>& rows) {
  std::string s;
  for (const auto& r : rows) {
    s += format_row(r);
    s += '\n';
  }
  return s;
}

}  // namespace

SweepSummary cmd_sweep(const SweepSpec& spec, const SystemConfig& base) {
  spec.validate();

  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Method> methods;
  for (Method m : spec.methods)
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);

  std::vector<SystemConfig> configs;
  for (double v : values) configs.push_back(config_for_value(base, spec.axis, v));

  std::vector<Cell> cells;
  std::vector<std::size_t> config_of;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (int s = 0; s < spec.num_seeds; ++s)
      for (Method m : methods) {
        cells.push_back({values[vi], spec.seed_base + static_cast<std::uint64_t>(s), m});
        config_of.push_back(vi);
      }

  std::map<CellKey, std::string> previous;
  if (spec.resume) previous = load_completed(spec.output_path);

  std::vector<std::optional<std::string>> results(cells.size());
  std::vector<std::string> errors(cells.size());
  SweepSummary summary;
  summary.cells = cells.size();
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = previous.find(key_of(cells[i].seed, cells[i].value, to_string(cells[i].method)));
    if (it != previous.end()) {
      results[i] = it->second;
      ++summary.resumed;
    } else {
      todo.push_back(i);
    }
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (spec.output_path != "-") {
    file.open(spec.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot open output file '" + spec.output_path + "'");
    out = &file;
  }
  write_preamble(*out);
  out->flush();

  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::size_t failed = 0;

  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= todo.size()) return;
      const std::size_t i = todo[j];
      const Cell& c = cells[i];
      std::string text;
      std::string err;
      try {
        text = render(cmd_run(configs[config_of[i]], c.method, c.seed, c.value, spec.run).rows);
      } catch (const std::exception& e) {
        err = e.what();
        text = render({failure_row(c.seed, c.value, to_string(c.method))});
      }
      {
        std::lock_guard lock(mu);
        results[i] = std::move(text);
        if (!err.empty()) {
          errors[i] = std::move(err);
          ++failed;
        }
      }
      cv.notify_all();
    }
  };

  const int n_threads = resolve_threads(spec.threads, todo.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);

  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string text;
    std::string err;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return results[i].has_value(); });
      text = std::move(*results[i]);
      err = errors[i];
    }
    *out << text;
    out->flush();
    if (!err.empty())
      std::cerr << "cell seed=" << cells[i].seed << " value=" << format_double(cells[i].value)
                << " method=" << to_string(cells[i].method) << " failed: " << err << '\n';
  }
  for (auto& th : pool) th.join();
  if (!*out) throw Error("write error on '" + spec.output_path + "'");

  summary.computed = todo.size();
  summary.failed = failed;
  return summary;
}

OracleRun cmd_oracle(const SystemConfig& cfg, std::uint64_t seed, OracleMode mode, double axis_value) {
  cfg.validate();
  const int cap = mode == OracleMode::G ? kBruteForceGCap : kBruteForceEeCap;
  if (cfg.N() > cap)
    throw CapExceeded("oracle: N = " + std::to_string(cfg.N()) + " exceeds the enumeration cap " +
                      std::to_string(cap));
  const ChannelRealization chan = draw_channel(cfg, seed);
  OracleRun out;
  ResultRow row;
  row.seed = seed;
  row.axis_value = axis_value;
  row.stage = Stage::Final;
  if (mode == OracleMode::EE) {
    out.result = brute_force_ee(chan, cfg);
    const EEReport& r = out.result.best_report;
    row.method = "oracle_ee";
    row.se = r.se;
    row.ee = r.ee;
    row.tx_power_w = r.tx_power;
    row.on_count = r.on_count;
    row.feasible = r.feasible;
  } else {
    const RisConfig q0 = all_off_ris(chan.N());
    const RVector t0 = t_coefficients(effective_channel(chan, q0), cfg.cond_cap);
    const PowerAllocation alloc = dinkelbach(make_alloc_problem(cfg, t0, q0.on_count()));
    out.result = brute_force_g(chan, alloc.p, RisCostParams::from(cfg));
    const RVector t = t_coefficients(effective_channel(chan, out.result.best_q), cfg.cond_cap);
    const EEReport r = metrics(cfg, out.result.best_q, alloc.p, t);
    row.method = "oracle_g";
    row.se = r.se;
    row.ee = r.ee;
    row.tx_power_w = r.tx_power;
    row.on_count = r.on_count;
    row.feasible = r.feasible;
  }
  out.row = row;
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e)) return 1;
  if (dynamic_cast<const Infeasible*>(&e) || dynamic_cast<const NoFeasibleStart*>(&e) ||
      dynamic_cast<const CapExceeded*>(&e) || dynamic_cast<const AllInfeasible*>(&e) ||
      dynamic_cast<const RelaxationInfeasible*>(&e) || dynamic_cast<const SingularChannel*>(&e) ||
      dynamic_cast<const NoFeasibleRounding*>(&e))
    return 2;
  if (dynamic_cast<const SolverFailure*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e)) return 1;
  return 3;
}

}  // namespace risee
