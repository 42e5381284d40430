#include "twostage/sounding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace twostage {

namespace {

constexpr double kMinInverseCondition = 1e-12;

}  // namespace

ComplexMatrix dft_combiner(Index n) {
  if (n < 1) throw std::invalid_argument("dft_combiner: n must be >= 1");
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix m(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      // Reduce p*q mod n before scaling so large n keeps exact phases.
      const auto k = static_cast<double>((p * q) % n);
      m(p, q) = std::polar(amplitude, -2.0 * std::numbers::pi * k / static_cast<double>(n));
    }
  }
  return m;
}

Index stage1_channel_uses(Index columns, Index n_rx, Index n_rf) {
  if (columns < 0 || n_rx < 1 || n_rf < 1) {
    throw std::invalid_argument("stage1_channel_uses: invalid dimensions");
  }
  return columns * ((n_rx + n_rf - 1) / n_rf);
}

ObservationBlock sound_columns(const ComplexMatrix& h, Index m, const ComplexMatrix& combiner,
                               Index n_rf, double sigma2, Rng& rng) {
  const Index n_rx = h.rows();
  if (m < 1 || m > h.cols()) {
    throw std::invalid_argument("sound_columns: m=" + std::to_string(m) + " outside [1, " +
                                std::to_string(h.cols()) + "]");
  }
  if (combiner.rows() != n_rx || combiner.cols() != n_rx) {
    throw std::invalid_argument("sound_columns: combiner must be n_rx x n_rx");
  }
  if (n_rf < 1) throw std::invalid_argument("sound_columns: n_rf must be >= 1");

  ObservationBlock block;
  block.combiner = combiner;
  block.injected_noise = sample_complex_gaussian(rng, n_rx, m, sigma2);
  block.observations.resize(n_rx, m);

  for (Index i = 0; i < m; ++i) {
    // Transmit sounder e_i (unit power) selects column i.
    const ComplexVector received = h.col(i) + block.injected_noise.col(i);
    for (Index first = 0; first < n_rx; first += n_rf) {
      const Index width = std::min(n_rf, n_rx - first);
      block.observations.col(i).segment(first, width) =
          combiner.middleCols(first, width).adjoint() * received;
      ++block.channel_uses;
    }
  }
  return block;
}

ObservationBlock sound_columns_stage1(const ComplexMatrix& h, Index m, Index n_rf,
                                      double sigma2, Rng& rng) {
  return sound_columns(h, m, dft_combiner(h.rows()), n_rf, sigma2, rng);
}

ComplexMatrix invert_combiner(const ObservationBlock& block) {
  const ComplexMatrix& m = block.combiner;
  if (m.rows() != m.cols() || m.rows() != block.observations.rows()) {
    throw std::invalid_argument("invert_combiner: combiner must be square and match Y");
  }
  require_finite(m, "invert_combiner");
  const Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m.adjoint());
  // |r_nn| / |r_11| of the pivoted QR tracks sigma_min / sigma_max; an LU
  // rcond estimate can miss exact rank loss.
  const auto r = qr.matrixR().diagonal().cwiseAbs();
  const double rcond = r(0) > 0.0 ? r(r.size() - 1) / r(0) : 0.0;
  if (!(rcond >= kMinInverseCondition)) {
    std::ostringstream msg;
    msg << "invert_combiner: combiner is singular (condition number estimate "
        << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
    throw std::domain_error(msg.str());
  }
  return qr.solve(block.observations);
}

}  // namespace twostage
