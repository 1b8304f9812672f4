// SPDX-License-Identifier: Apache-2.0
//
// ris-ee-lab: single runs, sweeps and exhaustive oracles for 1-bit RIS
// energy-efficiency optimization. Results are written as versioned CSV.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risee/config_io.hpp"
#include "risee/experiment.hpp"

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON scenario file (defaults when omitted)");
  cmd->add_option("--set", c.overrides, "Override a config key, KEY=VALUE (repeatable)");
}

risee::SystemConfig build_config(const Common& c) {
  risee::SystemConfig cfg = c.config_path.empty() ? risee::SystemConfig{} : risee::load_config(c.config_path);
  for (const auto& o : c.overrides) risee::apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const auto& s : raw) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw risee::ConfigError("bad sweep value '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<risee::Method> parse_methods(const std::vector<std::string>& raw) {
  std::vector<risee::Method> out;
  for (const auto& s : raw) out.push_back(risee::parse_method(s));
  return out;
}

void write_rows(const std::string& path, const std::vector<risee::ResultRow>& rows) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (path != "-") {
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw risee::Error("cannot open output file '" + path + "'");
    out = &file;
  }
  risee::write_preamble(*out);
  for (const auto& r : rows) *out << risee::format_row(r) << '\n';
  out->flush();
  if (!*out) throw risee::Error("write error on '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-bit RIS energy-efficiency experiments"};
  app.require_subcommand(1);

  Common run_common;
  std::string run_method = "gradient";
  std::uint64_t run_seed = 0;
  std::string run_out = "-";
  risee::RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Single AO run with its full iteration trace");
  add_common(run, run_common);
  run->add_option("--method", run_method, "gradient | sdp | successive | random | all_off");
  run->add_option("--seed", run_seed, "Channel and algorithm seed");
  run->add_option("--out", run_out, "Output CSV path, - for stdout");
  run->add_option("--max-ao-iters", run_opts.max_ao_iters, "AO iteration limit");
  run->add_option("--sdp-rounds", run_opts.sdp_rounds, "Randomized rounding draws per SDP step");
  run->add_flag("--timing", run_opts.timing, "Record runtime_ms (output no longer byte-deterministic)");

  struct SweepArgs {
    Common common;
    std::vector<std::string> values;
    std::vector<std::string> methods{"gradient", "sdp", "successive", "random", "all_off"};
    int seeds = 1;
    std::uint64_t seed_base = 0;
    std::string out = "-";
    bool resume = false;
    int threads = 0;
    risee::RunOptions run;
  };
  SweepArgs power_args, elem_args;
  auto add_sweep = [&](const char* name, const char* help, const char* values_help, SweepArgs& a) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, a.common);
    cmd->add_option("--values", a.values, values_help)->required()->delimiter(',');
    cmd->add_option("--seeds", a.seeds, "Number of seeds per value");
    cmd->add_option("--seed-base", a.seed_base, "First seed");
    cmd->add_option("--methods", a.methods, "Comma-separated method list")->delimiter(',');
    cmd->add_option("--out", a.out, "Output CSV path, - for stdout");
    cmd->add_flag("--resume", a.resume, "Keep complete cells already in --out");
    cmd->add_option("--threads", a.threads, "Worker count (RIS_EE_THREADS caps it)");
    cmd->add_option("--max-ao-iters", a.run.max_ao_iters, "AO iteration limit");
    cmd->add_option("--sdp-rounds", a.run.sdp_rounds, "Randomized rounding draws per SDP step");
    cmd->add_flag("--timing", a.run.timing, "Record runtime_ms");
    return cmd;
  };
  auto* sweep_power = add_sweep("sweep-power", "Sweep the BS power budget", "Pmax values in dBW", power_args);
  auto* sweep_elements =
      add_sweep("sweep-elements", "Sweep the RIS size (n x n)", "Element counts, perfect squares", elem_args);

  Common oracle_common;
  std::string oracle_mode = "ee";
  std::uint64_t oracle_seed = 0;
  std::string oracle_out = "-";
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search over all RIS states");
  add_common(oracle, oracle_common);
  oracle->add_option("--mode", oracle_mode, "g: minimize power cost at fixed p; ee: maximize EE")
      ->check(CLI::IsMember({"g", "ee"}));
  oracle->add_option("--seed", oracle_seed, "Channel seed");
  oracle->add_option("--out", oracle_out, "Output CSV path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const risee::SystemConfig cfg = build_config(run_common);
      const auto result = risee::cmd_run(cfg, risee::parse_method(run_method), run_seed,
                                         risee::watts_to_dbw(cfg.Pmax), run_opts);
      write_rows(run_out, result.rows);
    } else if (*sweep_power || *sweep_elements) {
      SweepArgs& a = *sweep_power ? power_args : elem_args;
      risee::SweepSpec spec;
      spec.axis = *sweep_power ? risee::SweepAxis::PmaxDbw : risee::SweepAxis::RisElements;
      spec.values = parse_values(a.values);
      spec.methods = parse_methods(a.methods);
      spec.num_seeds = a.seeds;
      spec.seed_base = a.seed_base;
      spec.output_path = a.out;
      spec.resume = a.resume;
      spec.threads = a.threads;
      spec.run = a.run;
      const risee::SystemConfig cfg = build_config(a.common);
      const auto summary = risee::cmd_sweep(spec, cfg);
      std::cerr << summary.cells << " cells: " << summary.computed << " computed, " << summary.resumed
                << " resumed, " << summary.failed << " failed\n";
    } else if (*oracle) {
      const risee::SystemConfig cfg = build_config(oracle_common);
      const auto mode = oracle_mode == "g" ? risee::OracleMode::G : risee::OracleMode::EE;
      const auto result = risee::cmd_oracle(cfg, oracle_seed, mode, risee::watts_to_dbw(cfg.Pmax));
      write_rows(oracle_out, {result.row});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return risee::exit_code_for(e);
  }
  return 0;
}
