#include "twostage/stage2.hpp"

#include <sstream>
#include <stdexcept>

namespace twostage {

namespace {

constexpr double kMinSounderInverseCondition = 1e-10;

}  // namespace

std::string_view to_string(RecoveryMode mode) {
  switch (mode) {
    case RecoveryMode::PseudoInverse: return "pseudo-inverse";
    case RecoveryMode::PaperLiteral: return "paper-literal";
    case RecoveryMode::Ideal: return "ideal";
  }
  return "unknown";
}

RecoveryMode parse_recovery_mode(std::string_view text) {
  if (text == "pseudo-inverse") return RecoveryMode::PseudoInverse;
  if (text == "paper-literal") return RecoveryMode::PaperLiteral;
  if (text == "ideal") return RecoveryMode::Ideal;
  throw std::invalid_argument("unknown recovery mode '" + std::string(text) +
                              "' (expected pseudo-inverse, paper-literal or ideal)");
}

SteeringDictionary build_dictionary(Index n_rx, Index grid_size, Index n_rf) {
  if (n_rx < 1) throw std::invalid_argument("build_dictionary: n_rx must be >= 1");
  if (grid_size < n_rf || grid_size < 1) {
    throw std::invalid_argument("build_dictionary: grid size " + std::to_string(grid_size) +
                                " is smaller than n_rf=" + std::to_string(n_rf));
  }
  SteeringDictionary dict;
  dict.atoms.resize(n_rx, grid_size);
  dict.grid.resize(static_cast<std::size_t>(grid_size));
  for (Index k = 0; k < grid_size; ++k) {
    const double g = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(grid_size);
    dict.grid[static_cast<std::size_t>(k)] = g;
    dict.atoms.col(k) = steering_vector_sin(g, n_rx);
  }
  return dict;
}

HybridSounder design_sounder_omp(const ComplexMatrix& u_hat, const SteeringDictionary& dict,
                                 Index n_rf) {
  const Index n_atoms = dict.atoms.cols();
  if (u_hat.rows() != dict.atoms.rows() || u_hat.cols() < 1) {
    throw std::invalid_argument("design_sounder_omp: basis and dictionary disagree on n_rx");
  }
  if (n_rf < u_hat.cols()) {
    throw std::invalid_argument("design_sounder_omp: n_rf=" + std::to_string(n_rf) +
                                " is below the subspace dimension " +
                                std::to_string(u_hat.cols()));
  }
  if (n_atoms < n_rf) {
    throw std::invalid_argument("design_sounder_omp: dictionary has " +
                                std::to_string(n_atoms) + " atoms, need " +
                                std::to_string(n_rf));
  }
  require_finite(u_hat, "design_sounder_omp");

  HybridSounder out;
  out.analog.resize(u_hat.rows(), 0);
  std::vector<bool> used(static_cast<std::size_t>(n_atoms), false);
  ComplexMatrix residual = u_hat;

  for (Index iter = 0; iter < n_rf; ++iter) {
    const RealVector energy = (dict.atoms.adjoint() * residual).rowwise().squaredNorm();
    Index best = -1;
    for (Index k = 0; k < n_atoms; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      if (best < 0 || energy(k) > energy(best)) best = k;
    }
    used[static_cast<std::size_t>(best)] = true;
    out.atom_indices.push_back(best);

    out.analog.conservativeResize(Eigen::NoChange, iter + 1);
    out.analog.col(iter) = dict.atoms.col(best);
    out.digital = min_norm_solve(out.analog, u_hat);
    residual = u_hat - out.analog * out.digital;
    out.residual_history.push_back(residual.norm());
  }

  out.product = out.analog * out.digital;
  out.residual = out.residual_history.back();
  return out;
}

HybridSounder ideal_sounder(const ComplexMatrix& u_hat) {
  HybridSounder out;
  out.product = u_hat;
  out.residual = 0.0;
  return out;
}

ComplexMatrix recovery_operator(const ComplexMatrix& sounder, RecoveryMode mode) {
  require_finite(sounder, "recovery_operator");
  if (mode == RecoveryMode::PaperLiteral) return sounder;

  const double rcond = inverse_condition(sounder);
  if (rcond < kMinSounderInverseCondition) {
    std::ostringstream msg;
    msg << "recovery_operator: W^H W is singular (sounder inverse condition " << rcond
        << " < " << kMinSounderInverseCondition << ", " << sounder.cols() << " columns)";
    throw std::domain_error(msg.str());
  }
  return pseudo_inverse(sounder.adjoint());
}

ComplexVector sound_and_recover_column(const ComplexMatrix& h, Index column,
                                       const ComplexMatrix& sounder, double sigma2,
                                       RecoveryMode mode, Rng& rng) {
  if (column < 0 || column >= h.cols()) {
    throw std::invalid_argument("sound_and_recover_column: column index out of range");
  }
  if (sounder.rows() != h.rows()) {
    throw std::invalid_argument("sound_and_recover_column: sounder has wrong row count");
  }
  const ComplexMatrix op = recovery_operator(sounder, mode);
  const ComplexVector noise = sample_complex_gaussian(rng, h.rows(), 1, sigma2).col(0);
  const ComplexVector y = sounder.adjoint() * (h.col(column) + noise);
  return op * y;
}

RemainingEstimate estimate_remaining(const ComplexMatrix& h, const ComplexMatrix& u_hat,
                                     const SystemConfig& cfg, RecoveryMode mode, Rng& rng) {
  cfg.validate();
  if (h.rows() != cfg.n_rx || h.cols() != cfg.n_tx || u_hat.rows() != cfg.n_rx) {
    throw std::invalid_argument("estimate_remaining: shapes disagree with config");
  }
  if (u_hat.cols() > cfg.n_rf) {
    throw std::invalid_argument("estimate_remaining: one channel use per column needs n_rf >= L");
  }

  RemainingEstimate out;
  if (mode == RecoveryMode::Ideal) {
    out.sounder = ideal_sounder(u_hat);
  } else {
    const SteeringDictionary dict =
        build_dictionary(cfg.n_rx, cfg.effective_grid_size(), cfg.n_rf);
    out.sounder = design_sounder_omp(u_hat, dict, cfg.n_rf);
  }

  const ComplexMatrix& w = out.sounder.product;
  const Index remaining = cfg.n_tx - cfg.m;
  out.columns.resize(cfg.n_rx, remaining);
  if (remaining == 0) return out;

  const ComplexMatrix op = recovery_operator(w, mode);
  const ComplexMatrix noise = sample_complex_gaussian(rng, cfg.n_rx, remaining, cfg.noise_var);
  for (Index k = 0; k < remaining; ++k) {
    const ComplexVector y = w.adjoint() * (h.col(cfg.m + k) + noise.col(k));
    out.columns.col(k) = op * y;
    ++out.channel_uses;
  }
  return out;
}

}  // namespace twostage
