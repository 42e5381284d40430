#include "twostage/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twostage {

namespace {

constexpr double kPhaseAnchorTolerance = 1e-12;

double zero_threshold(const ComplexMatrix& a, double sigma_max) {
  return static_cast<double>(std::max(a.rows(), a.cols())) *
         std::numeric_limits<double>::epsilon() * sigma_max;
}

}  // namespace

void require_finite(const ComplexMatrix& a, std::string_view what) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument(std::string(what) +
                                    ": non-finite entry at (" +
                                    std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
      }
    }
  }
}

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("svd: empty matrix");
  }
  require_finite(a, "svd");

  Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};

  for (Index j = 0; j < out.left_vectors.cols(); ++j) {
    auto u = out.left_vectors.col(j);
    for (Index i = 0; i < u.size(); ++i) {
      const double mag = std::abs(u(i));
      if (mag > kPhaseAnchorTolerance) {
        const Complex rotation = std::conj(u(i)) / mag;
        u *= rotation;
        out.right_vectors.col(j) *= rotation;
        u(i) = Complex(mag, 0.0);
        break;
      }
    }
  }
  return out;
}

ComplexMatrix truncate_rank(const SvdResult& s, Index rank) {
  const Index available = s.singular_values.size();
  if (rank < 1 || rank > available) {
    throw std::invalid_argument("truncate_rank: rank " + std::to_string(rank) +
                                " outside [1, " + std::to_string(available) + "]");
  }
  return s.left_vectors.leftCols(rank) *
         s.singular_values.head(rank).cast<Complex>().asDiagonal() *
         s.right_vectors.leftCols(rank).adjoint();
}

ComplexMatrix dominant_left_basis(const ComplexMatrix& a, Index rank) {
  const SvdResult s = svd(a);
  if (rank < 1 || rank > s.singular_values.size()) {
    throw std::invalid_argument("dominant_left_basis: rank " + std::to_string(rank) +
                                " outside [1, " +
                                std::to_string(s.singular_values.size()) + "]");
  }
  return s.left_vectors.leftCols(rank);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a) {
  const SvdResult s = svd(a);
  const double cutoff = zero_threshold(a, s.singular_values(0));
  RealVector inv = RealVector::Zero(s.singular_values.size());
  for (Index k = 0; k < inv.size(); ++k) {
    if (s.singular_values(k) > cutoff) inv(k) = 1.0 / s.singular_values(k);
  }
  return s.right_vectors * inv.cast<Complex>().asDiagonal() * s.left_vectors.adjoint();
}

ComplexMatrix min_norm_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("min_norm_solve: A has " + std::to_string(a.rows()) +
                                " rows but right-hand side has " +
                                std::to_string(b.rows()));
  }
  require_finite(b, "min_norm_solve rhs");
  return pseudo_inverse(a) * b;
}

ComplexVector min_norm_solve(const ComplexMatrix& a, const ComplexVector& b) {
  const ComplexMatrix x = min_norm_solve(a, ComplexMatrix(b));
  return x.col(0);
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  require_finite(a, "spectral_norm");
  Eigen::JacobiSVD<ComplexMatrix> solver(a);
  return solver.singularValues()(0);
}

double inverse_condition(const ComplexMatrix& a) {
  require_finite(a, "inverse_condition");
  Eigen::JacobiSVD<ComplexMatrix> solver(a);
  const RealVector& s = solver.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed ^ (key * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xFFFFFFFFULL),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

Rng Rng::split(std::uint64_t key) const { return Rng(derive_seed(seed_, key)); }

std::uint64_t Rng::next_u64() {
  ++position_;
  return engine_();
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Complex Rng::complex_normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

ComplexMatrix sample_complex_gaussian(Rng& rng, Index rows, Index cols,
                                      double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("sample_complex_gaussian: variance must be finite and >= 0");
  }
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("sample_complex_gaussian: negative dimension");
  }
  ComplexMatrix out(rows, cols);
  if (variance == 0.0) {
    out.setZero();
    return out;
  }
  const double scale = std::sqrt(variance);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = scale * rng.complex_normal();
  }
  return out;
}

}  // namespace twostage
