#ifndef TWOSTAGE_STAGE2_HPP
#define TWOSTAGE_STAGE2_HPP

#include <string>
#include <string_view>
#include <vector>

#include "twostage/channel.hpp"
#include "twostage/numkit.hpp"

namespace twostage {

/// How the second stage turns y_i = W^H (h_i + n_i) back into a column.
enum class RecoveryMode {
  PseudoInverse,  // W (W^H W)^{-1} y, the exact minimum-norm solution
  PaperLiteral,   // W y, exact only when W has orthonormal columns
  Ideal,          // W := U_hat (no hybrid factorisation), pseudo-inverse recovery
};

std::string_view to_string(RecoveryMode mode);
/// Accepts "pseudo-inverse", "paper-literal" and "ideal".
RecoveryMode parse_recovery_mode(std::string_view text);

/// Candidate analog columns: steering atoms on a uniform sine-domain grid.
struct SteeringDictionary {
  ComplexMatrix atoms;      // n_rx x G
  std::vector<double> grid; // g_k = -1 + 2k / G
};

SteeringDictionary build_dictionary(Index n_rx, Index grid_size, Index n_rf);

struct HybridSounder {
  ComplexMatrix analog;   // n_rx x n_rf, every entry of modulus 1/sqrt(n_rx)
  ComplexMatrix digital;  // n_rf x L
  ComplexMatrix product;  // analog * digital
  double residual = 0.0;  // ||U_hat - product||_F
  std::vector<double> residual_history;  // after each OMP iteration
  std::vector<Index> atom_indices;
};

/**
 * Simultaneous OMP factorisation U_hat ~ W_A W_D under the constant-modulus
 * constraint on W_A.
 *
 * Each of the n_rf iterations picks the unused atom whose correlation row
 * atom^H R has the largest 2-norm, then refits the digital part by minimum
 * Frobenius-norm least squares against U_hat and recomputes the residual R.
 */
HybridSounder design_sounder_omp(const ComplexMatrix& u_hat, const SteeringDictionary& dict,
                                 Index n_rf);

/// W := U_hat exactly; analog and digital are left empty.
HybridSounder ideal_sounder(const ComplexMatrix& u_hat);

/// Linear map taking y = W^H h back to an n_rx column for `mode`.
/// Throws std::domain_error if W^H W is singular in pseudo-inverse modes.
ComplexMatrix recovery_operator(const ComplexMatrix& sounder, RecoveryMode mode);

/// One channel use: transmit e_column, observe W^H (h + n), recover.
ComplexVector sound_and_recover_column(const ComplexMatrix& h, Index column,
                                       const ComplexMatrix& sounder, double sigma2,
                                       RecoveryMode mode, Rng& rng);

struct RemainingEstimate {
  ComplexMatrix columns;  // n_rx x (n_tx - m)
  Index channel_uses = 0;
  HybridSounder sounder;
};

/// Designs the sounder once and recovers columns m .. n_tx-1, one use each.
RemainingEstimate estimate_remaining(const ComplexMatrix& h, const ComplexMatrix& u_hat,
                                     const SystemConfig& cfg, RecoveryMode mode, Rng& rng);

}  // namespace twostage

#endif  // TWOSTAGE_STAGE2_HPP
