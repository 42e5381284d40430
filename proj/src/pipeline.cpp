#include "twostage/pipeline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twostage/sounding.hpp"
#include "twostage/subspace.hpp"

namespace twostage {

double nmse(const ComplexMatrix& h, const ComplexMatrix& h_hat) {
  if (h.rows() != h_hat.rows() || h.cols() != h_hat.cols()) {
    throw std::invalid_argument("nmse: shape mismatch");
  }
  const double energy = h.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("nmse: true channel is zero");
  return (h - h_hat).squaredNorm() / energy;
}

Index degrees_of_freedom(Index n_rx, Index n_tx, Index paths) {
  if (paths < 1 || paths > std::min(n_rx, n_tx)) {
    throw std::invalid_argument("degrees_of_freedom: paths must lie in [1, min(n_rx, n_tx)]");
  }
  return paths * (n_rx + n_tx - paths);
}

Index total_channel_uses(Index n_rx, Index n_tx, Index n_rf, Index m) {
  if (m < 0 || m > n_tx) throw std::invalid_argument("total_channel_uses: m out of range");
  return stage1_channel_uses(m, n_rx, n_rf) + (n_tx - m);
}

EstimateReport two_stage_estimate(const ChannelRealization& channel, const SystemConfig& cfg,
                                  RecoveryMode mode, const Rng& trial) {
  cfg.validate();
  const ComplexMatrix& h = channel.h;
  if (h.rows() != cfg.n_rx || h.cols() != cfg.n_tx) {
    throw std::invalid_argument("two_stage_estimate: channel shape disagrees with config");
  }
  if (cfg.n_rf < cfg.paths) {
    throw std::invalid_argument("two_stage_estimate: n_rf must be >= paths");
  }

  EstimateReport report;
  report.mode = std::string(to_string(mode));
  report.seed = trial.seed();
  report.dof = degrees_of_freedom(cfg.n_rx, cfg.n_tx, cfg.paths);

  try {
    Rng stage1_rng = trial.split(kStage1Stream);
    const ObservationBlock block =
        sound_columns_stage1(h, cfg.m, cfg.n_rf, cfg.noise_var, stage1_rng);
    const SubspaceEstimate subspace = estimate_stage1(invert_combiner(block), cfg.paths);

    Rng stage2_rng = trial.split(kStage2Stream);
    const RemainingEstimate rest = estimate_remaining(h, subspace.basis, cfg, mode, stage2_rng);

    report.h_hat.resize(cfg.n_rx, cfg.n_tx);
    report.h_hat << subspace.denoised, rest.columns;
    report.channel_uses_stage1 = block.channel_uses;
    report.channel_uses_stage2 = rest.channel_uses;
    report.channel_uses_total = block.channel_uses + rest.channel_uses;
    report.sounder_residual = rest.sounder.residual;
    report.nmse = nmse(h, report.h_hat);
    report.subspace_dist = subspace_distance(channel_column_basis(channel), subspace.basis);
  } catch (const std::domain_error& e) {
    report.failure = e.what();
    report.nmse = std::numeric_limits<double>::quiet_NaN();
    report.subspace_dist = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

EstimateReport full_observation_baseline(const ComplexMatrix& h, double sigma2, Index paths,
                                         Rng& rng, const ComplexMatrix& true_basis) {
  if (paths < 1 || paths > std::min(h.rows(), h.cols())) {
    throw std::invalid_argument("full_observation_baseline: paths out of range");
  }
  const ComplexMatrix y = h + sample_complex_gaussian(rng, h.rows(), h.cols(), sigma2);
  const SvdResult s = svd(y);

  EstimateReport report;
  report.mode = "full-observation";
  report.seed = rng.seed();
  report.genie = true;
  report.h_hat = truncate_rank(s, paths);
  report.nmse = nmse(h, report.h_hat);
  const ComplexMatrix reference =
      true_basis.size() > 0 ? true_basis : dominant_left_basis(h, paths);
  report.subspace_dist = subspace_distance(reference, s.left_vectors.leftCols(paths));
  report.dof = degrees_of_freedom(h.rows(), h.cols(), paths);
  report.channel_uses_total = h.rows() * h.cols();
  return report;
}

}  // namespace twostage
