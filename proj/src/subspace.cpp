#include "twostage/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twostage {

namespace {

constexpr double kOrthonormalTolerance = 1e-8;

void require_orthonormal(const ComplexMatrix& u, const char* what) {
  const ComplexMatrix gram = u.adjoint() * u;
  const double deviation =
      (gram - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (!(deviation <= kOrthonormalTolerance)) {
    throw std::invalid_argument(std::string("subspace_distance: ") + what +
                                " is not orthonormal (Gram deviation " +
                                std::to_string(deviation) + ")");
  }
}

}  // namespace

SubspaceEstimate estimate_stage1(const ComplexMatrix& y_tilde, Index rank) {
  const SvdResult s = svd(y_tilde);
  if (rank < 1 || rank > s.singular_values.size()) {
    throw std::invalid_argument("estimate_stage1: rank " + std::to_string(rank) +
                                " outside [1, " + std::to_string(s.singular_values.size()) +
                                "]");
  }
  return SubspaceEstimate{s.left_vectors.leftCols(rank), s.singular_values.head(rank),
                          truncate_rank(s, rank)};
}

double subspace_distance(const ComplexMatrix& u, const ComplexMatrix& u_hat) {
  if (u.rows() != u_hat.rows() || u.cols() != u_hat.cols() || u.size() == 0) {
    throw std::invalid_argument("subspace_distance: bases must share a nonempty shape");
  }
  require_finite(u, "subspace_distance");
  require_finite(u_hat, "subspace_distance");
  require_orthonormal(u, "first basis");
  require_orthonormal(u_hat, "second basis");

  const ComplexMatrix diff = u * u.adjoint() - u_hat * u_hat.adjoint();
  const ComplexMatrix squared = diff * diff;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(squared, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  return std::clamp(top, 0.0, 1.0);
}

double perturbation_bound(double sigma_l, double sigma2, Index n_rx, Index m, double c) {
  if (!(sigma_l > 0.0)) {
    throw std::invalid_argument("perturbation_bound: sigma_L must be positive");
  }
  if (!(sigma2 >= 0.0) || !(c > 0.0) || n_rx < 1 || m < 1) {
    throw std::invalid_argument("perturbation_bound: invalid arguments");
  }
  const double s2 = sigma_l * sigma_l;
  const double value = c * static_cast<double>(n_rx) *
                       (s2 * sigma2 + static_cast<double>(m) * sigma2 * sigma2) / (s2 * s2);
  return std::min(1.0, value);
}

InterlacingResult interlacing_check(const ComplexMatrix& h_s, const ComplexVector& h_new,
                                    Index rank) {
  if (h_new.size() != h_s.rows()) {
    throw std::invalid_argument("interlacing_check: column has length " +
                                std::to_string(h_new.size()) + ", expected " +
                                std::to_string(h_s.rows()));
  }
  const SvdResult base = svd(h_s);
  if (rank < 1 || rank > base.singular_values.size()) {
    throw std::invalid_argument("interlacing_check: rank out of range");
  }
  if (!(base.singular_values(rank - 1) > 0.0)) {
    throw std::invalid_argument("interlacing_check: H_S has rank below L");
  }

  ComplexMatrix extended(h_s.rows(), h_s.cols() + 1);
  extended << h_s, h_new;
  const SvdResult grown = svd(extended);

  const double before = base.singular_values(rank - 1);
  const double after = grown.singular_values(rank - 1);
  const Complex a_l = base.left_vectors.col(rank - 1).dot(h_new);  // u_L^H h
  return {after * after - before * before, std::norm(a_l)};
}

}  // namespace twostage
