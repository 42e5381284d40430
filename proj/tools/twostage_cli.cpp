// twostage: command-line front end for the two-stage mmWave channel estimator.
//
//   twostage estimate [flags]   one realization, prints a JSON report
//   twostage sweep    [flags]   Monte Carlo sweep, writes per-trial CSV
//   twostage check    [flags]   property/oracle suites, exit status 1 on failure
//
// Flags may precede or follow the subcommand and may also come from a
// TOML/INI file given with --config; flags on the command line win.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twostage/channel.hpp"
#include "twostage/checks.hpp"
#include "twostage/harness.hpp"
#include "twostage/pipeline.hpp"

namespace {

using namespace twostage;

struct Options {
  SystemConfig cfg;
  std::vector<Index> m_values;
  std::vector<double> snr_db;
  Index trials = 200;
  std::vector<std::string> modes;
  bool baseline = false;
  unsigned workers = 1;
  std::string out;
  std::string summary;
  std::string channel_in;
  std::string channel_out;
};

nlohmann::json report_json(const EstimateReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["seed"] = r.seed;
  j["nmse"] = r.nmse;
  j["subspace_dist"] = r.subspace_dist;
  j["channel_uses_stage1"] = r.channel_uses_stage1;
  j["channel_uses_stage2"] = r.channel_uses_stage2;
  j["channel_uses_total"] = r.channel_uses_total;
  j["dof"] = r.dof;
  j["sounder_residual"] = r.sounder_residual;
  j["genie"] = r.genie;
  if (r.failure) j["failure"] = *r.failure;
  return j;
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  return file;
}

int run_estimate(const Options& opt) {
  SystemConfig cfg = opt.cfg;
  cfg.m = opt.m_values.empty() ? cfg.m : opt.m_values.front();
  const double snr = opt.snr_db.empty() ? 10.0 : opt.snr_db.front();
  cfg.noise_var = snr_db_to_noise_var(snr);
  const RecoveryMode mode =
      opt.modes.empty() ? RecoveryMode::PseudoInverse : parse_recovery_mode(opt.modes.front());

  const Rng trial(cfg.seed);
  ChannelRealization channel;
  if (!opt.channel_in.empty()) {
    channel = load_channel(opt.channel_in);
  } else {
    cfg.validate();
    Rng channel_rng = trial.split(kChannelStream);
    channel = generate_channel(cfg, channel_rng);
  }
  if (!opt.channel_out.empty()) save_channel(channel, opt.channel_out);

  nlohmann::json out;
  out["snr_db"] = snr;
  out["m"] = cfg.m;
  out["report"] = report_json(two_stage_estimate(channel, cfg, mode, trial));
  if (opt.baseline) {
    Rng baseline_rng = trial.split(kBaselineStream);
    EstimateReport baseline = full_observation_baseline(channel.h, cfg.noise_var, cfg.paths,
                                                        baseline_rng, channel_column_basis(channel));
    baseline.seed = trial.seed();
    out["baseline"] = report_json(baseline);
  }

  std::ofstream file;
  output_stream(opt.out, file) << out.dump(2) << '\n';
  return 0;
}

int run_sweep_command(const Options& opt) {
  SweepSpec spec;
  spec.base = opt.cfg;
  if (!opt.m_values.empty()) spec.m_values = opt.m_values;
  if (!opt.snr_db.empty()) spec.snr_db = opt.snr_db;
  spec.trials = opt.trials;
  if (!opt.modes.empty()) {
    spec.modes.clear();
    for (const auto& m : opt.modes) spec.modes.push_back(parse_recovery_mode(m));
  }
  spec.baseline = opt.baseline;
  spec.workers = opt.workers;
  spec.output_path = opt.out;
  // The base m only has to be valid; each grid point overrides it.
  spec.base.m = spec.m_values.front();

  const std::vector<SweepRow> rows = run_sweep(spec);
  {
    std::ofstream file;
    write_csv(output_stream(spec.output_path, file), rows);
  }
  if (!opt.summary.empty()) {
    std::ofstream file;
    write_summary_csv(output_stream(opt.summary, file), summarize(rows));
  }
  return 0;
}

int run_check(const Options& opt) {
  bool all = true;
  for (const CheckResult& r : run_all_checks(opt.cfg.seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage millimeter-wave MIMO channel estimation simulator"};
  app.set_config("--config", "", "TOML/INI file with flag values (flags override it)");
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--nr", opt.cfg.n_rx, "Receive antennas")->capture_default_str();
  app.add_option("--nt", opt.cfg.n_tx, "Transmit antennas")->capture_default_str();
  app.add_option("--paths", opt.cfg.paths, "Propagation paths L")->capture_default_str();
  app.add_option("--nrf", opt.cfg.n_rf, "RF chains")->capture_default_str();
  app.add_option("--m", opt.m_values, "Sounded columns in stage 1 (list)");
  app.add_option("--snr-db", opt.snr_db, "SNR points in dB (list)");
  app.add_option("--trials", opt.trials, "Trials per grid point")->capture_default_str();
  app.add_option("--seed", opt.cfg.seed, "Base seed (trial seed for estimate)")->capture_default_str();
  app.add_option("--grid-size", opt.cfg.grid_size, "OMP dictionary size (0 = 2*nr)")
      ->capture_default_str();
  app.add_option("--mode", opt.modes, "Recovery mode(s)")
      ->check(CLI::IsMember({"pseudo-inverse", "paper-literal", "ideal"}));
  app.add_flag("--baseline", opt.baseline, "Also run the full-observation baseline");
  app.add_option("--workers", opt.workers, "Worker threads for sweep")->capture_default_str();
  app.add_option("--out", opt.out, "Output path (default stdout)");

  auto* estimate = app.add_subcommand("estimate", "Estimate one channel realization");
  estimate->add_option("--channel-in", opt.channel_in, "Load the channel from a JSON fixture");
  estimate->add_option("--channel-out", opt.channel_out, "Save the channel as a JSON fixture");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over SNR and m");
  sweep->add_option("--summary", opt.summary, "Write per-point mean/stderr CSV here");
  auto* check = app.add_subcommand("check", "Run the property and oracle suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return run_estimate(opt);
    if (*sweep) return run_sweep_command(opt);
    if (*check) return run_check(opt);
  } catch (const std::exception& e) {
    std::cerr << "twostage: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
