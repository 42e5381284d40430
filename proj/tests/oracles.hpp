// Test-only reference implementations. Nothing here calls into the library's
// decompositions, so agreement with the library is a two-route check.
#ifndef TWOSTAGE_TESTS_ORACLES_HPP
#define TWOSTAGE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Eigen_ {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns match values
};

// Cyclic complex Jacobi on a Hermitian matrix. Each rotation first removes
// the phase of a(p, q) with diag(1, e^{-i phi}) and then applies the real
// symmetric Jacobi rotation.
inline Eigen_ hermitian_eigen(Matrix a) {
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-60 || off < 1e-34 * a.squaredNorm()) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        const Complex j_pp = c, j_pq = s;
        const Complex j_qp = -s * std::conj(phase), j_qq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * j_pp + akq * j_qp;
          a(k, q) = akp * j_pq + akq * j_qq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * j_pp + vkq * j_qp;
          v(k, q) = vkp * j_pq + vkq * j_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- J^H A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(j_pp) * apk + std::conj(j_qp) * aqk;
          a(q, k) = std::conj(j_pq) * apk + std::conj(j_qq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](auto x, auto y) { return a(x, x).real() > a(y, y).real(); });
  Eigen_ out;
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = order[static_cast<std::size_t>(i)];
    out.values.push_back(a(k, k).real());
    out.vectors.col(i) = v.col(k);
  }
  return out;
}

// Singular values from the Gram eigenvalues, descending, length min(r, c).
inline std::vector<double> singular_values(const Matrix& a) {
  const bool tall = a.rows() >= a.cols();
  const Matrix gram = tall ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  auto e = hermitian_eigen(gram);
  std::vector<double> s;
  for (double x : e.values) s.push_back(std::sqrt(std::max(0.0, x)));
  return s;
}

// Orthonormal basis of the dominant `rank`-dimensional column space.
inline Matrix column_basis(const Matrix& a, Eigen::Index rank) {
  return hermitian_eigen(a * a.adjoint()).vectors.leftCols(rank);
}

inline double hermitian_spectral_norm(const Matrix& a) {
  const auto e = hermitian_eigen(a);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

// ||U U^H - V V^H||_2^2 from the eigenvalues of the projector difference.
inline double projector_distance(const Matrix& u, const Matrix& v) {
  const double s = hermitian_spectral_norm(u * u.adjoint() - v * v.adjoint());
  return s * s;
}

// (A^H A)^{-1} A^H b; A must have full column rank.
inline Vector normal_equations(const Matrix& a, const Vector& b) {
  return Matrix(a.adjoint() * a).ldlt().solve(a.adjoint() * b);
}

inline Vector steering(double sin_theta, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double phase = -std::numbers::pi * static_cast<double>(k) * sin_theta;
    v(k) = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<double>(n));
  }
  return v;
}

// Sum of per-path outer products a_r a_t^T.
inline Matrix channel_sum_form(const std::vector<double>& aoa, const std::vector<double>& aod,
                               const std::vector<Complex>& gains, Eigen::Index nr,
                               Eigen::Index nt) {
  const double scale = std::sqrt(static_cast<double>(nr * nt) / static_cast<double>(gains.size()));
  Matrix h = Matrix::Zero(nr, nt);
  for (std::size_t l = 0; l < gains.size(); ++l) {
    const Vector ar = steering(std::sin(aoa[l]), nr);
    const Vector at = steering(std::sin(aod[l]), nt);
    for (Eigen::Index i = 0; i < nr; ++i)
      for (Eigen::Index j = 0; j < nt; ++j) h(i, j) += scale * gains[l] * ar(i) * at(j);
  }
  return h;
}

// |a(g1)^H a(g2)| for n-element steering vectors, Dirichlet-kernel form.
inline double steering_coherence(double g1, double g2, Eigen::Index n) {
  const double x = std::numbers::pi * (g1 - g2) / 2.0;
  const double den = static_cast<double>(n) * std::sin(x);
  if (std::abs(den) < 1e-15) return 1.0;
  return std::abs(std::sin(static_cast<double>(n) * x) / den);
}

}  // namespace oracle

#endif  // TWOSTAGE_TESTS_ORACLES_HPP
