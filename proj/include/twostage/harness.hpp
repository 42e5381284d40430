#ifndef TWOSTAGE_HARNESS_HPP
#define TWOSTAGE_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twostage/channel.hpp"
#include "twostage/stage2.hpp"

namespace twostage {

struct SweepSpec {
  SystemConfig base;
  std::vector<double> snr_db = {-10, -5, 0, 5, 10, 15, 20};
  std::vector<Index> m_values = {4, 8, 16, 32};
  Index trials = 200;
  std::vector<RecoveryMode> modes = {RecoveryMode::PseudoInverse};
  bool baseline = false;
  unsigned workers = 1;
  std::string output_path;

  void validate() const;
  /// Rows produced by run_sweep.
  std::size_t row_count() const;
};

struct SweepRow {
  double snr_db = 0.0;
  Index m = 0;
  Index trial = 0;
  std::string mode;
  double nmse = 0.0;
  double subspace_dist = 0.0;
  Index channel_uses = 0;
  std::uint64_t seed = 0;
  bool failed = false;
};

/// sigma^2 = 10^(-snr_db / 10) for unit transmit power.
double snr_db_to_noise_var(double snr_db);

/// Seed of the stream owning trial `trial` of grid point `point`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, Index trial);

/**
 * Runs every (snr, m, trial) point: one channel draw per trial stream, each
 * recovery mode on that channel, then the full-observation baseline if
 * enabled. Rows come back ordered by (snr index, m index, trial, mode) with
 * the baseline last, independent of the worker count. A trial that throws is
 * kept as a row with failed = true and NaN metrics.
 */
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct SummaryRow {
  double snr_db = 0.0;
  Index m = 0;
  std::string mode;
  Index count = 0;     // successful trials
  Index failures = 0;
  double nmse_mean = 0.0;
  double nmse_stderr = 0.0;
  double dist_mean = 0.0;
  double dist_stderr = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n)) per (snr_db, m, mode), in
/// order of first appearance. Failed rows are counted but not averaged.
std::vector<SummaryRow> summarize(std::span<const SweepRow> rows);

/// Exact header: snr_db,m,trial,mode,nmse,subspace_dist,channel_uses,seed
std::string csv_header();
/// Header plus one line per row; reals use 17 significant digits. Failed rows
/// carry mode "failed:<mode>" and nan metrics.
void write_csv(std::ostream& os, std::span<const SweepRow> rows);
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);

}  // namespace twostage

#endif  // TWOSTAGE_HARNESS_HPP
