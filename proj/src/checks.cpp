#include "twostage/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twostage/channel.hpp"
#include "twostage/pipeline.hpp"
#include "twostage/sounding.hpp"
#include "twostage/stage2.hpp"
#include "twostage/subspace.hpp"

namespace twostage {

namespace {

SystemConfig reference_config() {
  SystemConfig cfg;
  cfg.n_rx = 32;
  cfg.n_tx = 128;
  cfg.paths = 4;
  cfg.n_rf = 6;
  cfg.m = 8;
  return cfg;
}

ComplexMatrix random_unitary(Rng& rng, Index n) {
  const ComplexMatrix g = sample_complex_gaussian(rng, n, n, 1.0);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

CheckResult finish(std::string name, double worst, double tolerance, bool extra_ok = true) {
  std::ostringstream os;
  os << "worst " << worst << " (tolerance " << tolerance << ")";
  return {std::move(name), extra_ok && worst <= tolerance, os.str()};
}

}  // namespace

CheckResult check_combiner_invariance(std::uint64_t seed, int instances) {
  const SystemConfig cfg = reference_config();
  const Rng root(seed);
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    Rng rng = root.split(static_cast<std::uint64_t>(k));
    Rng channel_rng = rng.split(0);
    const ChannelRealization ch = generate_channel(cfg, channel_rng);
    Rng combiner_rng = rng.split(1);
    const ComplexMatrix q = random_unitary(combiner_rng, cfg.n_rx);
    const double sigma2 = 0.05 + rng.uniform();

    const Rng noise_rng = rng.split(2);
    Rng a = noise_rng;
    Rng b = noise_rng;
    const ObservationBlock dft = sound_columns_stage1(ch.h, cfg.m, cfg.n_rf, sigma2, a);
    const ObservationBlock uni = sound_columns(ch.h, cfg.m, q, cfg.n_rf, sigma2, b);

    const ComplexMatrix h_s = select_columns(ch.h, cfg.m);
    const ComplexMatrix err_dft = invert_combiner(dft) - h_s;
    const ComplexMatrix err_uni = invert_combiner(uni) - h_s;
    worst = std::max({worst, (err_dft - dft.injected_noise).cwiseAbs().maxCoeff(),
                      (err_uni - uni.injected_noise).cwiseAbs().maxCoeff(),
                      (err_dft - err_uni).cwiseAbs().maxCoeff()});
  }
  return finish("combiner-invariance", worst, 1e-9);
}

CheckResult check_column_subspace(std::uint64_t seed, int instances) {
  SystemConfig cfg = reference_config();
  const Rng root(seed);
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    Rng rng = root.split(static_cast<std::uint64_t>(k));
    const ChannelRealization ch = generate_channel(cfg, rng);
    const ComplexMatrix full = dominant_left_basis(ch.h, cfg.paths);
    for (Index m : {cfg.paths, cfg.paths + 1, 2 * cfg.paths}) {
      const ComplexMatrix part = dominant_left_basis(select_columns(ch.h, m), cfg.paths);
      worst = std::max(worst, subspace_distance(full, part));
    }
  }
  return finish("column-subspace", worst, 1e-10);
}

CheckResult check_interlacing(std::uint64_t seed, int instances) {
  const SystemConfig cfg = reference_config();
  const Rng root(seed);
  double worst_excess = -INFINITY;  // delta - upper
  double worst_negative = 0.0;      // most negative delta
  for (int k = 0; k < instances; ++k) {
    Rng rng = root.split(static_cast<std::uint64_t>(k));
    const ChannelRealization ch = generate_channel(cfg, rng);
    const Index m = cfg.paths + static_cast<Index>(k % 8);
    const InterlacingResult r =
        interlacing_check(select_columns(ch.h, m), ch.h.col(m), cfg.paths);
    worst_excess = std::max(worst_excess, r.delta - r.upper);
    worst_negative = std::min(worst_negative, r.delta);
  }
  std::ostringstream os;
  os << "max(delta - |a_L|^2) = " << worst_excess << ", min delta = " << worst_negative
     << " (tolerance 1e-9)";
  return {"interlacing", worst_excess <= 1e-9 && worst_negative >= -1e-9, os.str()};
}

CheckResult check_omp_sounder(std::uint64_t seed, int instances) {
  SystemConfig cfg = reference_config();
  cfg.noise_var = 0.1;
  const Index grid = cfg.effective_grid_size();
  const SteeringDictionary dict = build_dictionary(cfg.n_rx, grid, cfg.n_rf);
  const double modulus = 1.0 / std::sqrt(static_cast<double>(cfg.n_rx));
  const Rng root(seed);

  double worst_modulus = 0.0;
  double worst_increase = 0.0;
  double worst_exact = 0.0;
  for (int k = 0; k < instances; ++k) {
    Rng rng = root.split(static_cast<std::uint64_t>(k));
    Rng channel_rng = rng.split(0);
    const ChannelRealization ch = generate_channel(cfg, channel_rng);
    Rng noise_rng = rng.split(1);
    const ObservationBlock block =
        sound_columns_stage1(ch.h, cfg.m, cfg.n_rf, cfg.noise_var, noise_rng);
    const SubspaceEstimate est = estimate_stage1(invert_combiner(block), cfg.paths);
    const HybridSounder w = design_sounder_omp(est.basis, dict, cfg.n_rf);

    worst_modulus = std::max(
        worst_modulus, (w.analog.cwiseAbs().array() - modulus).abs().maxCoeff());
    for (std::size_t t = 1; t < w.residual_history.size(); ++t) {
      worst_increase =
          std::max(worst_increase, w.residual_history[t] - w.residual_history[t - 1]);
    }

    // Even grid indices of a 2 n_rx grid are mutually orthogonal atoms.
    std::vector<Index> picks;
    while (static_cast<Index>(picks.size()) < cfg.paths) {
      const Index idx = 2 * static_cast<Index>(rng.uniform() * static_cast<double>(grid / 2));
      if (std::find(picks.begin(), picks.end(), idx) == picks.end()) picks.push_back(idx);
    }
    ComplexMatrix atoms(cfg.n_rx, cfg.paths);
    for (Index j = 0; j < cfg.paths; ++j) atoms.col(j) = dict.atoms.col(picks[static_cast<std::size_t>(j)]);
    const ComplexMatrix mixed = atoms * sample_complex_gaussian(rng, cfg.paths, cfg.paths, 1.0);
    const ComplexMatrix basis = dominant_left_basis(mixed, cfg.paths);
    worst_exact = std::max(worst_exact, design_sounder_omp(basis, dict, cfg.paths).residual);
  }

  std::ostringstream os;
  os << "modulus deviation " << worst_modulus << " (<= 1e-12), residual increase "
     << worst_increase << " (<= 1e-12), representable residual " << worst_exact
     << " (<= 1e-8)";
  return {"omp-sounder",
          worst_modulus <= 1e-12 && worst_increase <= 1e-12 && worst_exact <= 1e-8, os.str()};
}

CheckResult check_channel_uses() {
  const Index divisible = total_channel_uses(32, 128, 8, 8);
  const Index ceiling = total_channel_uses(32, 128, 6, 8);
  const Index dof = degrees_of_freedom(32, 128, 4);
  std::ostringstream os;
  os << "K(N_RF=8) = " << divisible << " (expect 152), K(N_RF=6) = " << ceiling
     << " (expect 168), DoF = " << dof << " (expect 624)";
  const bool ok = divisible == 152 && ceiling == 168 && dof == 624 && ceiling < dof;
  return {"channel-uses", ok, os.str()};
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  return {check_combiner_invariance(derive_seed(seed, 1)),
          check_column_subspace(derive_seed(seed, 2)), check_interlacing(derive_seed(seed, 3)),
          check_omp_sounder(derive_seed(seed, 4)), check_channel_uses()};
}

}  // namespace twostage
