#ifndef TWOSTAGE_CHANNEL_HPP
#define TWOSTAGE_CHANNEL_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "twostage/numkit.hpp"

namespace twostage {

/// Scenario parameters shared by every stage of the estimator.
struct SystemConfig {
  Index n_rx = 32;
  Index n_tx = 128;
  Index paths = 4;
  Index n_rf = 6;
  double noise_var = 0.1;  // sigma^2; SNR = 1 / sigma^2
  Index m = 8;             // columns sounded in the first stage
  Index grid_size = 0;     // OMP dictionary size; 0 selects 2 * n_rx
  std::uint64_t seed = 1;
  /// Upper bound on paths / min(n_rx, n_tx) for the sparse-channel regime.
  double max_path_fraction = 0.5;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  Index effective_grid_size() const { return grid_size > 0 ? grid_size : 2 * n_rx; }
};

/// Ground-truth channel H = sqrt(Nr Nt / L) A_r diag(gains) A_t^T.
struct ChannelRealization {
  ComplexMatrix h;
  std::vector<double> aoa;  // radians
  std::vector<double> aod;  // radians
  std::vector<Complex> gains;
  ComplexMatrix rx_steering;  // n_rx x L
  ComplexMatrix tx_steering;  // n_tx x L
};

/// ULA response with half-wavelength spacing:
/// entry k is exp(-j pi k sin(theta)) / sqrt(n).
ComplexVector steering_vector(double theta, Index n);
/// Same response parameterised directly by the spatial frequency sin(theta).
ComplexVector steering_vector_sin(double sin_theta, Index n);
ComplexMatrix steering_matrix(std::span<const double> thetas, Index n);

/// Product form of the channel from its factors.
ComplexMatrix assemble_channel(const ComplexMatrix& rx_steering,
                               std::span<const Complex> gains,
                               const ComplexMatrix& tx_steering);

/// Minimum |sin a - sin b| over distinct pairs; +inf for fewer than two angles.
double min_sine_separation(std::span<const double> thetas);

/// Angles uniform on (0, 2 pi), gains CN(0, 1). Draws where two AoDs (or two
/// AoAs) are closer than 1e-6 in the sine domain are discarded and redrawn.
ChannelRealization generate_channel(const SystemConfig& cfg, Rng& rng);

/// Orthonormal basis of col(H). Taken from the receive steering matrix
/// (col(H) = col(A_r) for distinct angles and nonzero gains); falls back to
/// the dominant left singular vectors of H when the factors are absent.
ComplexMatrix channel_column_basis(const ChannelRealization& channel);

/// First m columns of H (H S with S the column-selection matrix).
ComplexMatrix select_columns(const ComplexMatrix& h, Index m);

// Fixture I/O. Schema (JSON object):
//   "n_rx", "n_tx", "paths": integers
//   "aoa", "aod": arrays of radians
//   "gains": array of [re, im]
//   "h": row-major array of [re, im], n_rx * n_tx entries
std::string channel_to_json(const ChannelRealization& channel);
ChannelRealization channel_from_json(const std::string& text);
void save_channel(const ChannelRealization& channel, const std::filesystem::path& path);
ChannelRealization load_channel(const std::filesystem::path& path);

}  // namespace twostage

#endif  // TWOSTAGE_CHANNEL_HPP
