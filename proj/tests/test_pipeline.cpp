#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "twostage/pipeline.hpp"
#include "twostage/sounding.hpp"

using namespace twostage;
using Catch::Matchers::WithinAbs;

TEST_CASE("nmse") {
  Rng rng(61);
  const ComplexMatrix h = sample_complex_gaussian(rng, 4, 6, 1.0);
  CHECK(nmse(h, h) == 0.0);
  CHECK(nmse(h, ComplexMatrix::Zero(4, 6)) == 1.0);
  CHECK_THAT(nmse(h, 2.0 * h), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(nmse(ComplexMatrix::Zero(4, 6), h), std::invalid_argument);
  CHECK_THROWS_AS(nmse(h, ComplexMatrix::Zero(4, 5)), std::invalid_argument);
}

TEST_CASE("degrees of freedom") {
  CHECK(degrees_of_freedom(32, 128, 4) == 624);
  CHECK(degrees_of_freedom(9, 9, 9) == 81);
  CHECK(degrees_of_freedom(2, 2, 1) == 3);
  CHECK_THROWS_AS(degrees_of_freedom(2, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(degrees_of_freedom(2, 2, 0), std::invalid_argument);
}

TEST_CASE("channel-use totals") {
  CHECK(total_channel_uses(32, 128, 8, 8) == 152);
  CHECK(total_channel_uses(32, 128, 6, 8) == 168);
  CHECK(total_channel_uses(32, 128, 6, 8) < degrees_of_freedom(32, 128, 4));
  for (Index nr : {8, 12, 32})
    for (Index nrf : {2, 3, 5, 6, 8})
      for (Index m : {1, 4, 9}) {
        const Index ceil_ratio = (nr + nrf - 1) / nrf;
        CHECK(total_channel_uses(nr, 64, nrf, m) == m * ceil_ratio + 64 - m);
      }
}

TEST_CASE("budget: K < DoF once N_RF exceeds the break-even ratio") {
  int checked = 0;
  for (Index nr : {4, 8, 16, 32, 64})
    for (Index nt : {8, 16, 32, 64, 128, 256})
      for (Index paths = 1; paths <= std::min(nr, nt) / 2; ++paths)
        for (Index m = paths; m <= nt / 2; ++m)
          for (Index nrf = 2; nrf <= nr; ++nrf) {
            if (nr % nrf != 0) continue;
            const Index dof = degrees_of_freedom(nr, nt, paths);
            // nrf > nr m / (dof - nt + m), cross-multiplied (the denominator is positive).
            if (nrf * (dof - nt + m) <= nr * m) continue;
            REQUIRE(total_channel_uses(nr, nt, nrf, m) < dof);
            ++checked;
          }
  CHECK(checked > 1000);
  // At the break-even point itself the budget is met with equality.
  CHECK(total_channel_uses(8, 16, 4, 7) == degrees_of_freedom(8, 16, 1));
}

TEST_CASE("noiseless ideal-mode estimate is exact") {
  SystemConfig cfg;
  cfg.noise_var = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Rng trial(seed);
    Rng channel_rng = trial.split(kChannelStream);
    const ChannelRealization ch = generate_channel(cfg, channel_rng);
    const EstimateReport r = two_stage_estimate(ch, cfg, RecoveryMode::Ideal, trial);
    REQUIRE_FALSE(r.failure);
    CHECK(r.nmse <= 1e-18);
    CHECK(r.subspace_dist <= 1e-10);
  }
}

TEST_CASE("report fields are consistent") {
  SystemConfig cfg;
  cfg.n_rf = 8;
  const Rng trial(62);
  Rng channel_rng = trial.split(kChannelStream);
  const ChannelRealization ch = generate_channel(cfg, channel_rng);
  for (auto mode : {RecoveryMode::PseudoInverse, RecoveryMode::PaperLiteral, RecoveryMode::Ideal}) {
    const EstimateReport r = two_stage_estimate(ch, cfg, mode, trial);
    CHECK(r.channel_uses_stage1 == 32);
    CHECK(r.channel_uses_stage2 == 120);
    CHECK(r.channel_uses_total == 152);
    CHECK(r.dof == 624);
    CHECK(r.mode == to_string(mode));
    CHECK(r.seed == 62);
    CHECK_FALSE(r.genie);
    CHECK(r.nmse >= 0.0);
    CHECK(r.subspace_dist >= 0.0);
    CHECK(r.subspace_dist <= 1.0);
    CHECK(r.h_hat.rows() == 32);
    CHECK(r.h_hat.cols() == 128);
  }
}

TEST_CASE("H_hat keeps the sampled columns in front") {
  SystemConfig cfg;
  const Rng trial(63);
  Rng channel_rng = trial.split(kChannelStream);
  const ChannelRealization ch = generate_channel(cfg, channel_rng);
  const EstimateReport r = two_stage_estimate(ch, cfg, RecoveryMode::PseudoInverse, trial);

  Rng stage1 = trial.split(kStage1Stream);
  const ObservationBlock b = sound_columns_stage1(ch.h, cfg.m, cfg.n_rf, cfg.noise_var, stage1);
  const ComplexMatrix y = invert_combiner(b);
  const ComplexMatrix p = oracle::column_basis(y, cfg.paths);
  const ComplexMatrix denoised = p * (p.adjoint() * y);
  CHECK((r.h_hat.leftCols(cfg.m) - denoised).norm() <= 1e-10 * denoised.norm());
}

TEST_CASE("estimates are deterministic in the trial seed") {
  SystemConfig cfg;
  const Rng trial(64);
  Rng c1 = trial.split(kChannelStream), c2 = trial.split(kChannelStream);
  const ChannelRealization ch1 = generate_channel(cfg, c1);
  const ChannelRealization ch2 = generate_channel(cfg, c2);
  const EstimateReport a = two_stage_estimate(ch1, cfg, RecoveryMode::PseudoInverse, trial);
  const EstimateReport b = two_stage_estimate(ch2, cfg, RecoveryMode::PseudoInverse, trial);
  CHECK(a.h_hat == b.h_hat);
  CHECK(a.nmse == b.nmse);
  CHECK(a.subspace_dist == b.subspace_dist);
  const EstimateReport c = two_stage_estimate(ch1, cfg, RecoveryMode::PseudoInverse, Rng(65));
  CHECK(c.nmse != a.nmse);
}

TEST_CASE("invalid configurations throw instead of reporting") {
  SystemConfig cfg;
  const Rng trial(66);
  Rng channel_rng = trial.split(kChannelStream);
  const ChannelRealization ch = generate_channel(cfg, channel_rng);
  SystemConfig bad = cfg;
  bad.n_rf = 3;
  CHECK_THROWS_AS(two_stage_estimate(ch, bad, RecoveryMode::PseudoInverse, trial), std::invalid_argument);
  bad = cfg;
  bad.n_tx = 64;
  CHECK_THROWS_AS(two_stage_estimate(ch, bad, RecoveryMode::PseudoInverse, trial), std::invalid_argument);
}

TEST_CASE("full-observation baseline") {
  SystemConfig cfg;
  Rng rng(67);
  const ChannelRealization ch = generate_channel(cfg, rng);

  Rng quiet(1);
  const EstimateReport exact = full_observation_baseline(ch.h, 0.0, 4, quiet);
  CHECK(exact.nmse <= 1e-18);
  CHECK(exact.genie);
  CHECK(exact.mode == "full-observation");
  CHECK(exact.channel_uses_total == 32 * 128);

  Rng a(2), b(2);
  const EstimateReport noisy = full_observation_baseline(ch.h, 0.1, 4, a, channel_column_basis(ch));
  const ComplexMatrix y = ch.h + sample_complex_gaussian(b, 32, 128, 0.1);
  const ComplexMatrix p = oracle::column_basis(y, 4);
  const ComplexMatrix expected = p * (p.adjoint() * y);
  CHECK((noisy.h_hat - expected).norm() <= 1e-12 * ch.h.norm());
  CHECK(svd(noisy.h_hat).singular_values(4) <= 1e-10 * ch.h.norm());
  CHECK_THAT(noisy.subspace_dist,
             WithinAbs(oracle::projector_distance(channel_column_basis(ch), p), 1e-10));
}
