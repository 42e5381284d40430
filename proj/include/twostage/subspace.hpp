#ifndef TWOSTAGE_SUBSPACE_HPP
#define TWOSTAGE_SUBSPACE_HPP

#include "twostage/numkit.hpp"

namespace twostage {

/// Rank-L PCA of the first-stage observations.
struct SubspaceEstimate {
  ComplexMatrix basis;          // n_rx x L, orthonormal columns
  RealVector singular_values;   // leading L singular values of the denoised block
  ComplexMatrix denoised;       // best rank-L approximation
};

/// Frobenius-optimal rank-L approximation of `y_tilde` and its column basis.
SubspaceEstimate estimate_stage1(const ComplexMatrix& y_tilde, Index rank);

/**
 * Squared spectral norm of the projector difference, ||U U^H - V V^H||_2^2,
 * i.e. sin^2 of the largest principal angle. Both inputs need orthonormal
 * columns (Gram deviation <= 1e-8) of the same shape. The value is the largest
 * eigenvalue of D^2 with D the projector difference, which is unchanged by
 * swapping the arguments, so the metric is exactly symmetric.
 */
double subspace_distance(const ComplexMatrix& u, const ComplexMatrix& u_hat);

/// min(1, C n_rx (sigma_L^2 sigma2 + m sigma2^2) / sigma_L^4).
double perturbation_bound(double sigma_l, double sigma2, Index n_rx, Index m, double c = 1.0);

struct InterlacingResult {
  double delta;  // sigma_L^2([H_S, h]) - sigma_L^2(H_S)
  double upper;  // |a_L|^2 with a = U^H h, U the top-L left vectors of H_S
};

/// Effect of appending one column on the L-th singular value.
InterlacingResult interlacing_check(const ComplexMatrix& h_s, const ComplexVector& h_new,
                                    Index rank);

}  // namespace twostage

#endif  // TWOSTAGE_SUBSPACE_HPP
