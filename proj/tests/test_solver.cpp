#include <gtest/gtest.h>

#include <algorithm>

#include "pipeadc/solver.hpp"

using namespace pipeadc;

TEST(MinDcGain, EightBitHalfBeta) {
  const auto g = min_dc_gain({8, 0.25, 0.5, 0.0});
  EXPECT_DOUBLE_EQ(g.linear, 2048.0);
  EXPECT_NEAR(g.db, 66.23, 0.005);
}

TEST(MinDcGain, UnityBeta) {
  const auto g = min_dc_gain({8, 0.25, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(g.linear, 1024.0);
  EXPECT_NEAR(g.db, 60.21, 0.005);
}

TEST(MinDcGain, OneBitHalfLsb) { EXPECT_DOUBLE_EQ(min_dc_gain({1, 0.5, 1.0, 0.0}).linear, 4.0); }

TEST(MinGbw, NearNineFiftyMegahertz) {
  const double gbw = min_gbw({8, 0.25, 0.5, 2.323e-9});
  EXPECT_NEAR(gbw, 950e6, 0.005 * 950e6);
  // (8 ln2 + ln4) / (pi t)
  EXPECT_NEAR(gbw, (8 * std::log(2.0) + std::log(4.0)) / (std::numbers::pi * 2.323e-9), 1e-3);
}

TEST(MinGbw, ScalesInverselyWithTimeAndBeta) {
  const Budget b{8, 0.25, 0.5, 2e-9};
  Budget twice = b;
  twice.t_settle *= 2;
  EXPECT_NEAR(min_gbw(twice), min_gbw(b) / 2, 1e-6);
  Budget unity = b;
  unity.beta = 1.0;
  EXPECT_NEAR(min_gbw(unity), min_gbw(b) / 2, 1e-6);
}

TEST(MinGbw, RequiresSettlingTime) { EXPECT_THROW(min_gbw({8, 0.25, 0.5, 0.0}), Error); }

TEST(Budget, InvalidRejected) {
  EXPECT_THROW(min_dc_gain({0, 0.25, 0.5, 1e-9}), Error);
  EXPECT_THROW(min_dc_gain({8, 1.0, 0.5, 1e-9}), Error);
  EXPECT_THROW(min_dc_gain({8, 0.0, 0.5, 1e-9}), Error);
  EXPECT_THROW(min_dc_gain({8, 0.25, 0.0, 1e-9}), Error);
}

TEST(Budget, MonotoneInErrorFractionAndBits) {
  for (int n = 1; n < 14; ++n) {
    for (double e = 0.05; e < 0.95; e += 0.05) {
      const Budget b{n, e, 0.5, 2e-9};
      Budget looser = b, finer = b;
      looser.err_fraction = e + 0.05;
      finer.n_bits = n + 1;
      EXPECT_GT(min_dc_gain(b).linear, min_dc_gain(looser).linear);
      EXPECT_GT(min_gbw(b), min_gbw(looser));
      EXPECT_LT(min_dc_gain(b).linear, min_dc_gain(finer).linear);
      EXPECT_LT(min_gbw(b), min_gbw(finer));
    }
  }
}

TEST(Budget, StageBudgetRelaxes) {
  const Budget b{8, 0.25, 0.5, 2e-9};
  EXPECT_EQ(stage_budget(b, 1).n_bits, 8);
  EXPECT_EQ(stage_budget(b, 6).n_bits, 3);
  EXPECT_DOUBLE_EQ(min_dc_gain(stage_budget(b, 2)).linear, 1024.0);
  EXPECT_THROW(stage_budget(b, 0), Error);
}

// An amplifier sized exactly at the budget keeps the first stage's
// full-scale settling error within half an LSB.
TEST(Budget, ConsistencyLoopOnFirstStage) {
  AdcConfig c;
  const Budget b = budget_for(c);
  c.ota.a0 = min_dc_gain(b).linear;
  c.ota.gbw = min_gbw(b);
  const double target = c.reference.vref;
  const double out = ota_settle({target, 0.0, c.stage_ota(0), c.clock.t_settle()});
  const double err = std::abs(out - target) / target;
  EXPECT_LE(err, 0.5 * std::ldexp(1.0, -8));
  EXPECT_GT(err, 0.25 * std::ldexp(1.0, -8));  // both halves of the budget are in use
}

TEST(Sweep, EmptyValuesGiveHeaderOnly) {
  const auto rows = sweep(presets::ideal(), "ota.a0_db", {}, SweepMetric::enob);
  EXPECT_TRUE(rows.empty());
  EXPECT_EQ(sweep_csv("ota.a0_db", SweepMetric::enob, rows), "ota.a0_db,enob_bits\n");
}

TEST(Sweep, InvalidPathRejected) {
  EXPECT_THROW(sweep(presets::ideal(), "ota.bogus", {1.0}, SweepMetric::enob), Error);
  EXPECT_THROW(sweep(presets::ideal(), "ota.bogus", {}, SweepMetric::enob), Error);
  EXPECT_THROW(sweep(presets::ideal(), "ota.beta", {0.0}, SweepMetric::enob), Error);
}

namespace {

// Once the amplifier error is below the quantizer's own pattern noise, ENOB
// moves by whatever a sub-LSB change in signal amplitude does to the ideal
// code sequence. Measure that spread directly: amplitudes within a quarter
// LSB of full scale.
double quantization_pattern_spread() {
  double lo = 1e9, hi = -1e9;
  for (int i = -10; i <= 10; ++i) {
    SineTestOptions o;
    o.amplitude_fraction = 1.0 + i * 0.025 * 2.0 / kNumCodes;
    const double e = run_sine_test(presets::ideal(), o).report.enob;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

void expect_nondecreasing(const std::vector<SweepRow>& rows, double slack) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_GE(rows[i].metric, rows[i - 1].metric - slack) << rows[i].value;
}

}  // namespace

TEST(Sweep, EnobRisesWithGain) {
  const std::vector<double> db{30, 40, 50, 60};
  const auto rows = sweep(presets::ideal(), "ota.a0_db", db, SweepMetric::enob);
  ASSERT_EQ(rows.size(), db.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].value, db[i]);
  expect_nondecreasing(rows, 0.0);
}

TEST(Sweep, EnobRisesWithSettleTime) {
  auto base = presets::ideal();
  base.ota.gbw = 950e6;
  const auto rows =
      sweep(base, "clock.settle_fraction", {0.1, 0.15, 0.2, 0.25, 0.3}, SweepMetric::enob);
  expect_nondecreasing(rows, 0.0);
}

// Near the budget the curves flatten into the quantization floor.
TEST(Sweep, EnobFlatAboveBudget) {
  const double floor = quantization_pattern_spread();
  EXPECT_GT(floor, 0.0);
  EXPECT_LT(floor, 0.25);
  expect_nondecreasing(
      sweep(presets::ideal(), "ota.a0_db", {60, 66.2, 80, 100}, SweepMetric::enob), floor);
  auto base = presets::ideal();
  base.ota.gbw = 950e6;
  expect_nondecreasing(
      sweep(base, "clock.settle_fraction", {0.2, 0.3, 0.387, 0.5}, SweepMetric::enob), floor);
}

TEST(Sweep, MatchesSerialRuns) {
  const auto base = presets::degraded(3);
  const std::vector<double> vals{0.0, 0.02, 0.05};
  const auto rows = sweep(base, "ota.k_mem", vals, SweepMetric::enob);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    auto c = base;
    c.ota.k_mem = vals[i];
    EXPECT_EQ(rows[i].metric, run_sine_test(c).report.enob);
  }
}
