#ifndef TWOSTAGE_SOUNDING_HPP
#define TWOSTAGE_SOUNDING_HPP

#include "twostage/numkit.hpp"

namespace twostage {

/// Stacked first-stage observations Y = M^H H_S + M^H N.
struct ObservationBlock {
  ComplexMatrix observations;    // n_rx x m
  ComplexMatrix combiner;        // M, n_rx x n_rx
  ComplexMatrix injected_noise;  // N, kept for oracle checks
  Index channel_uses = 0;
};

/// Unitary DFT matrix, entry (p, q) = exp(-j 2 pi p q / n) / sqrt(n).
ComplexMatrix dft_combiner(Index n);

/// Channel uses needed to observe `columns` columns through n_rx-wide
/// combiners when each use delivers n_rf outputs: columns * ceil(n_rx / n_rf).
Index stage1_channel_uses(Index columns, Index n_rx, Index n_rf);

/**
 * Sounds the first m columns of `h` with transmit sounders e_i.
 *
 * For each column the combiner's columns are tiled into consecutive blocks of
 * n_rf (the last block may be narrower), one block per channel use, and the
 * per-use outputs W_k^H (h_i + n_i) are stacked. Noise for all m columns is
 * drawn first as one n_rx x m CN(0, sigma2) matrix, so two calls from equal
 * rng states inject the same noise whatever the combiner.
 */
ObservationBlock sound_columns(const ComplexMatrix& h, Index m, const ComplexMatrix& combiner,
                               Index n_rf, double sigma2, Rng& rng);

/// sound_columns with the DFT combiner.
ObservationBlock sound_columns_stage1(const ComplexMatrix& h, Index m, Index n_rf,
                                      double sigma2, Rng& rng);

/// (M^H)^{-1} Y. Throws std::domain_error when M is numerically singular.
ComplexMatrix invert_combiner(const ObservationBlock& block);

}  // namespace twostage

#endif  // TWOSTAGE_SOUNDING_HPP
