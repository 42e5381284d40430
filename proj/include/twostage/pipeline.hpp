#ifndef TWOSTAGE_PIPELINE_HPP
#define TWOSTAGE_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "twostage/channel.hpp"
#include "twostage/stage2.hpp"

namespace twostage {

struct EstimateReport {
  ComplexMatrix h_hat;  // [H_S_hat, H_R_hat] in original column order
  double nmse = 0.0;
  double subspace_dist = 0.0;  // true column space of H vs stage-1 basis
  Index channel_uses_stage1 = 0;
  Index channel_uses_stage2 = 0;
  Index channel_uses_total = 0;
  Index dof = 0;
  std::string mode;
  std::uint64_t seed = 0;
  double sounder_residual = 0.0;
  /// Full-observation reports count n_rx * n_tx entrywise observations; they
  /// are not sounding channel uses and must not be compared with K.
  bool genie = false;
  /// Set when the trial failed numerically; the metrics are then NaN.
  std::optional<std::string> failure;
};

/// ||H - H_hat||_F^2 / ||H||_F^2.
double nmse(const ComplexMatrix& h, const ComplexMatrix& h_hat);

/// L (n_rx + n_tx - L), parameter count of a rank-L matrix.
Index degrees_of_freedom(Index n_rx, Index n_tx, Index paths);

/// m ceil(n_rx / n_rf) + (n_tx - m).
Index total_channel_uses(Index n_rx, Index n_tx, Index n_rf, Index m);

/// Stream layout used by the pipeline: channel draw, stage-1 noise, stage-2
/// noise and baseline noise each come from a fixed child of the trial stream.
enum StreamKey : std::uint64_t {
  kChannelStream = 0,
  kStage1Stream = 1,
  kStage2Stream = 2,
  kBaselineStream = 3,
};

/**
 * Two-stage estimation of one realization: DFT sounding of the first m
 * columns, rank-L PCA, hybrid sounder design, and single-use recovery of the
 * remaining columns. Noise is drawn from children of `trial` so the result is
 * a pure function of (channel, cfg, mode, trial.seed()).
 *
 * Invalid configurations throw; numerical failures inside the trial are
 * returned as a report with `failure` set.
 */
EstimateReport two_stage_estimate(const ChannelRealization& channel, const SystemConfig& cfg,
                                  RecoveryMode mode, const Rng& trial);

/// Rank-L truncation of the entrywise observation Y = H + N (accuracy floor).
/// `true_basis` is the reference for subspace_dist; when empty it is the
/// dominant L-dimensional left singular subspace of H.
EstimateReport full_observation_baseline(const ComplexMatrix& h, double sigma2, Index paths,
                                         Rng& rng, const ComplexMatrix& true_basis = {});

}  // namespace twostage

#endif  // TWOSTAGE_PIPELINE_HPP
