#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "twostage/harness.hpp"

using namespace twostage;
using Catch::Matchers::WithinAbs;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.base.n_rx = 16;
  spec.base.n_tx = 32;
  spec.base.paths = 2;
  spec.base.n_rf = 4;
  spec.base.m = 4;
  spec.base.seed = 7;
  spec.snr_db = {0.0, 10.0};
  spec.m_values = {2, 4};
  spec.trials = 3;
  spec.modes = {RecoveryMode::PseudoInverse, RecoveryMode::PaperLiteral};
  spec.baseline = true;
  return spec;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

SweepRow row(double snr, Index m, std::string mode, double nmse, double dist) {
  SweepRow r;
  r.snr_db = snr;
  r.m = m;
  r.mode = std::move(mode);
  r.nmse = nmse;
  r.subspace_dist = dist;
  return r;
}

}  // namespace

TEST_CASE("SNR to noise variance") {
  CHECK(snr_db_to_noise_var(0.0) == 1.0);
  CHECK_THAT(snr_db_to_noise_var(10.0), WithinAbs(0.1, 1e-16));
  CHECK_THAT(snr_db_to_noise_var(-10.0), WithinAbs(10.0, 1e-14));
}

TEST_CASE("sweep row count, order and content") {
  const SweepSpec spec = small_spec();
  const std::vector<SweepRow> rows = run_sweep(spec);
  REQUIRE(rows.size() == spec.row_count());
  CHECK(rows.size() == 2 * 2 * 3 * 3);

  std::size_t k = 0;
  for (double snr : spec.snr_db)
    for (Index m : spec.m_values)
      for (Index t = 0; t < spec.trials; ++t)
        for (const char* mode : {"pseudo-inverse", "paper-literal", "full-observation"}) {
          const SweepRow& r = rows[k++];
          CHECK(r.snr_db == snr);
          CHECK(r.m == m);
          CHECK(r.trial == t);
          CHECK(r.mode == mode);
          CHECK_FALSE(r.failed);
          CHECK(std::isfinite(r.nmse));
          CHECK(std::isfinite(r.subspace_dist));
          if (r.mode == std::string("full-observation")) {
            CHECK(r.channel_uses == 16 * 32);
          } else {
            CHECK(r.channel_uses == m * 4 + 32 - m);
          }
        }
  // Modes and baseline of one trial share the trial stream.
  CHECK(rows[0].seed == rows[1].seed);
  CHECK(rows[0].seed == rows[2].seed);
  CHECK(rows[0].seed == trial_seed(7, 0, 0));
  CHECK(rows[3].seed == trial_seed(7, 0, 1));
  CHECK(rows[9].seed == trial_seed(7, 1, 0));
}

TEST_CASE("single trial at one grid point") {
  SweepSpec spec = small_spec();
  spec.snr_db = {5.0};
  spec.m_values = {4};
  spec.trials = 1;
  spec.modes = {RecoveryMode::PseudoInverse};
  spec.baseline = false;
  CHECK(run_sweep(spec).size() == 1);
  spec.baseline = true;
  const auto rows = run_sweep(spec);
  CHECK(rows.size() == 2);
  CHECK(csv(rows) == csv(run_sweep(spec)));
}

TEST_CASE("sweep output is independent of worker count") {
  SweepSpec spec = small_spec();
  const std::string one = csv(run_sweep(spec));
  spec.workers = 4;
  const std::string four = csv(run_sweep(spec));
  CHECK(one == four);
  CHECK(one == csv(run_sweep(spec)));
  spec.base.seed = 8;
  CHECK(one != csv(run_sweep(spec)));
}

TEST_CASE("CSV format") {
  CHECK(csv_header() == "snr_db,m,trial,mode,nmse,subspace_dist,channel_uses,seed");
  SweepRow r = row(-5, 8, "pseudo-inverse", 0.1, 1.0 / 3.0);
  r.trial = 2;
  r.channel_uses = 168;
  r.seed = 18446744073709551615ull;
  SweepRow f = row(10, 4, "ideal", std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN());
  f.failed = true;
  const std::string text = csv({r, f});
  CHECK(text ==
        "snr_db,m,trial,mode,nmse,subspace_dist,channel_uses,seed\n"
        "-5,8,2,pseudo-inverse,0.10000000000000001,0.33333333333333331,168,18446744073709551615\n"
        "10,4,0,failed:ideal,nan,nan,0,0\n");
}

TEST_CASE("summarize") {
  SECTION("single row") {
    const std::vector<SweepRow> rows{row(0, 4, "ideal", 0.25, 0.5)};
    const auto s = summarize(rows);
    REQUIRE(s.size() == 1);
    CHECK(s[0].nmse_mean == 0.25);
    CHECK(s[0].nmse_stderr == 0.0);
    CHECK(s[0].count == 1);
  }
  SECTION("identical rows") {
    const std::vector<SweepRow> rows{row(0, 4, "ideal", 0.25, 0.5), row(0, 4, "ideal", 0.25, 0.5)};
    CHECK(summarize(rows)[0].nmse_stderr == 0.0);
  }
  SECTION("two values") {
    const std::vector<SweepRow> rows{row(0, 4, "ideal", 0.1, 0.0), row(0, 4, "ideal", 0.3, 0.0)};
    const auto s = summarize(rows);
    CHECK_THAT(s[0].nmse_mean, WithinAbs(0.2, 1e-15));
    CHECK_THAT(s[0].nmse_stderr, WithinAbs(0.1, 1e-15));
  }
  SECTION("groups keep first-appearance order and skip failures") {
    std::vector<SweepRow> rows{row(10, 8, "b", 1.0, 0.1), row(0, 4, "a", 2.0, 0.2),
                               row(10, 8, "b", 3.0, 0.3)};
    SweepRow f = row(0, 4, "a", 0.0, 0.0);
    f.failed = true;
    rows.push_back(f);
    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].mode == "b");
    CHECK(s[0].count == 2);
    CHECK(s[0].nmse_mean == 2.0);
    CHECK(s[1].mode == "a");
    CHECK(s[1].failures == 1);
    CHECK(s[1].count == 1);
  }
  SECTION("empty input") {
    CHECK_THROWS_AS(summarize(std::vector<SweepRow>{}), std::invalid_argument);
  }
}

TEST_CASE("sweep validation") {
  auto bad = [](auto mutate) {
    SweepSpec spec = small_spec();
    mutate(spec);
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  };
  bad([](SweepSpec& s) { s.trials = 0; });
  bad([](SweepSpec& s) { s.m_values = {1}; });
  bad([](SweepSpec& s) { s.m_values = {33}; });
  bad([](SweepSpec& s) { s.snr_db = {}; });
  bad([](SweepSpec& s) {
    s.modes = {};
    s.baseline = false;
  });
  bad([](SweepSpec& s) { s.workers = 0; });
}
