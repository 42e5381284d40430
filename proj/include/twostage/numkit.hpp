#ifndef TWOSTAGE_NUMKIT_HPP
#define TWOSTAGE_NUMKIT_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace twostage {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/**
 * Thin SVD A = U diag(s) V^H.
 *
 * Singular values are sorted non-increasing. Each left singular vector is
 * rotated so that its first entry with modulus above 1e-12 is real and
 * non-negative; the matching right vector carries the same rotation, so the
 * product is unchanged. Individual vectors of repeated singular values are
 * still arbitrary; compare subspaces through projectors.
 */
struct SvdResult {
  ComplexMatrix left_vectors;
  RealVector singular_values;
  ComplexMatrix right_vectors;
};

/// Throws std::invalid_argument naming `what` if any entry is NaN or Inf.
void require_finite(const ComplexMatrix& a, std::string_view what);

SvdResult svd(const ComplexMatrix& a);

/// Sum of the leading `rank` singular triplets. 1 <= rank <= min(rows, cols).
ComplexMatrix truncate_rank(const SvdResult& s, Index rank);

/// Orthonormal basis of the dominant `rank`-dimensional column space of `a`.
ComplexMatrix dominant_left_basis(const ComplexMatrix& a, Index rank);

/// Moore-Penrose pseudo-inverse. Singular values below
/// max(rows, cols) * eps * sigma_1 are treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a);

/// Minimum 2-norm least-squares solution of A x = b.
ComplexVector min_norm_solve(const ComplexMatrix& a, const ComplexVector& b);
/// Column-wise minimum-norm solution of A X = B.
ComplexMatrix min_norm_solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest singular value; 0 for the zero matrix.
double spectral_norm(const ComplexMatrix& a);

/// sigma_min / sigma_max of the thin SVD (0 for a zero matrix).
double inverse_condition(const ComplexMatrix& a);

/**
 * Seeded random stream.
 *
 * The engine is std::mt19937_64 seeded through std::seed_seq from the two
 * 32-bit halves of the stream seed; both are fully specified by the C++
 * standard, and uniform and Gaussian variates are derived here rather than
 * through the implementation-defined std distributions, so a seed yields the
 * same sequence on every conforming toolchain.
 *
 * split(key) derives an independent child stream whose seed is a SplitMix64
 * hash of (seed, key). Children depend only on the parent seed, never on how
 * far the parent has advanced, so Monte Carlo trials keyed by index are
 * reproducible regardless of scheduling.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  [[nodiscard]] Rng split(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Circularly-symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
  Complex complex_normal();

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.seed_ == b.seed_ && a.position_ == b.position_ &&
           a.engine_ == b.engine_;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer of (seed, key); used for all stream derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);

/// rows x cols matrix of i.i.d. CN(0, variance) entries.
ComplexMatrix sample_complex_gaussian(Rng& rng, Index rows, Index cols,
                                      double variance);

}  // namespace twostage

#endif  // TWOSTAGE_NUMKIT_HPP
