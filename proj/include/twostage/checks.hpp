#ifndef TWOSTAGE_CHECKS_HPP
#define TWOSTAGE_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace twostage {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Property suites behind `twostage check`. Each draws its instances from the
// given seed and reports the worst observed value against its tolerance.

/// Recovery error after combiner inversion equals the injected noise for the
/// DFT combiner and for a random unitary combiner sharing the noise draw.
CheckResult check_combiner_invariance(std::uint64_t seed, int instances = 50);
/// Noiseless: first m columns span the column space of H for m in {L, L+1, 2L}.
CheckResult check_column_subspace(std::uint64_t seed, int instances = 100);
/// Appending a column of col(H_S) raises sigma_L^2 by at most |a_L|^2.
CheckResult check_interlacing(std::uint64_t seed, int instances = 100);
/// Constant-modulus analog part, non-increasing residual, exact recovery of
/// bases spanned by mutually orthogonal (even-index) atoms. Greedy selection
/// carries no exact-recovery guarantee for coherent atom sets.
CheckResult check_omp_sounder(std::uint64_t seed, int instances = 50);
/// Channel-use totals for the divisible and ceiling configurations.
CheckResult check_channel_uses();

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

}  // namespace twostage

#endif  // TWOSTAGE_CHECKS_HPP
