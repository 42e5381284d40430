#include "twostage/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "twostage/pipeline.hpp"

namespace twostage {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct TrialTask {
  std::size_t point;
  double snr_db;
  Index m;
  Index trial;
};

// Fills the `per_trial` rows starting at `out` for one trial.
void run_trial(const SweepSpec& spec, const TrialTask& task, SweepRow* out) {
  SystemConfig cfg = spec.base;
  cfg.m = task.m;
  cfg.noise_var = snr_db_to_noise_var(task.snr_db);
  const Rng trial(trial_seed(spec.base.seed, task.point, task.trial));

  auto fill = [&](SweepRow& row, std::string mode) {
    row.snr_db = task.snr_db;
    row.m = task.m;
    row.trial = task.trial;
    row.mode = std::move(mode);
    row.seed = trial.seed();
  };
  auto mark_failed = [](SweepRow& row) {
    row.failed = true;
    row.nmse = std::numeric_limits<double>::quiet_NaN();
    row.subspace_dist = std::numeric_limits<double>::quiet_NaN();
  };

  std::size_t slot = 0;
  ChannelRealization channel;
  bool have_channel = true;
  try {
    Rng channel_rng = trial.split(kChannelStream);
    channel = generate_channel(cfg, channel_rng);
  } catch (const std::exception&) {
    have_channel = false;
  }

  for (RecoveryMode mode : spec.modes) {
    SweepRow& row = out[slot++];
    fill(row, std::string(to_string(mode)));
    if (!have_channel) {
      mark_failed(row);
      continue;
    }
    try {
      const EstimateReport report = two_stage_estimate(channel, cfg, mode, trial);
      row.channel_uses = report.channel_uses_total;
      if (report.failure) {
        mark_failed(row);
      } else {
        row.nmse = report.nmse;
        row.subspace_dist = report.subspace_dist;
      }
    } catch (const std::exception&) {
      mark_failed(row);
    }
  }

  if (spec.baseline) {
    SweepRow& row = out[slot];
    fill(row, "full-observation");
    if (!have_channel) {
      mark_failed(row);
      return;
    }
    try {
      Rng baseline_rng = trial.split(kBaselineStream);
      const EstimateReport report =
          full_observation_baseline(channel.h, cfg.noise_var, cfg.paths, baseline_rng,
                                    channel_column_basis(channel));
      row.nmse = report.nmse;
      row.subspace_dist = report.subspace_dist;
      row.channel_uses = report.channel_uses_total;
    } catch (const std::exception&) {
      mark_failed(row);
    }
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (snr_db.empty() || m_values.empty()) {
    throw std::invalid_argument("sweep: SNR and m lists must be nonempty");
  }
  if (modes.empty() && !baseline) {
    throw std::invalid_argument("sweep: no recovery mode and no baseline requested");
  }
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw std::invalid_argument("sweep: non-finite SNR");
  }
  for (Index m : m_values) {
    SystemConfig cfg = base;
    cfg.m = m;
    cfg.validate();
  }
  if (!modes.empty() && base.n_rf < base.paths) {
    throw std::invalid_argument("sweep: n_rf must be >= paths for single-use recovery");
  }
  if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
}

std::size_t SweepSpec::row_count() const {
  return snr_db.size() * m_values.size() * static_cast<std::size_t>(trials) *
         (modes.size() + (baseline ? 1 : 0));
}

double snr_db_to_noise_var(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, Index trial) {
  return derive_seed(derive_seed(base_seed, point), static_cast<std::uint64_t>(trial));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t per_trial = spec.modes.size() + (spec.baseline ? 1 : 0);

  std::vector<TrialTask> tasks;
  tasks.reserve(spec.snr_db.size() * spec.m_values.size() * static_cast<std::size_t>(spec.trials));
  std::size_t point = 0;
  for (double snr : spec.snr_db) {
    for (Index m : spec.m_values) {
      for (Index t = 0; t < spec.trials; ++t) tasks.push_back({point, snr, m, t});
      ++point;
    }
  }

  std::vector<SweepRow> rows(tasks.size() * per_trial);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1)) {
      run_trial(spec, tasks[k], rows.data() + k * per_trial);
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(spec.workers, tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const SweepRow> rows) {
  if (rows.empty()) throw std::invalid_argument("summarize: no rows");

  using Key = std::tuple<double, Index, std::string>;
  struct Acc {
    std::size_t order;
    std::vector<double> nmse, dist;
    Index failures = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& row : rows) {
    auto [it, inserted] = groups.try_emplace(Key{row.snr_db, row.m, row.mode},
                                             Acc{groups.size(), {}, {}, 0});
    if (row.failed) {
      ++it->second.failures;
    } else {
      it->second.nmse.push_back(row.nmse);
      it->second.dist.push_back(row.subspace_dist);
    }
  }

  auto mean_stderr = [](const std::vector<double>& v) -> std::pair<double, double> {
    if (v.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan};
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(v.size()))};
  };

  std::vector<SummaryRow> out(groups.size());
  for (const auto& [key, acc] : groups) {
    SummaryRow& s = out[acc.order];
    s.snr_db = std::get<0>(key);
    s.m = std::get<1>(key);
    s.mode = std::get<2>(key);
    s.count = static_cast<Index>(acc.nmse.size());
    s.failures = acc.failures;
    std::tie(s.nmse_mean, s.nmse_stderr) = mean_stderr(acc.nmse);
    std::tie(s.dist_mean, s.dist_stderr) = mean_stderr(acc.dist);
  }
  return out;
}

std::string csv_header() { return "snr_db,m,trial,mode,nmse,subspace_dist,channel_uses,seed"; }

void write_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    os << format_real(r.snr_db) << ',' << r.m << ',' << r.trial << ','
       << (r.failed ? "failed:" + r.mode : r.mode) << ',' << format_real(r.nmse) << ','
       << format_real(r.subspace_dist) << ',' << r.channel_uses << ',' << r.seed << '\n';
  }
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << "snr_db,m,mode,count,failures,nmse_mean,nmse_stderr,dist_mean,dist_stderr\n";
  for (const auto& s : rows) {
    os << format_real(s.snr_db) << ',' << s.m << ',' << s.mode << ',' << s.count << ','
       << s.failures << ',' << format_real(s.nmse_mean) << ',' << format_real(s.nmse_stderr)
       << ',' << format_real(s.dist_mean) << ',' << format_real(s.dist_stderr) << '\n';
  }
}

}  // namespace twostage
