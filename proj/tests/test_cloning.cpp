#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qleak/cloning.hpp"
#include "qleak/errors.hpp"
#include "qleak/random.hpp"

using namespace qleak;

TEST(Cloning, QubitCoefficients) {
  const auto k = region_coefficients(2);
  EXPECT_DOUBLE_EQ(k.a, 3.0);
  EXPECT_DOUBLE_EQ(k.b, -3.0);
  EXPECT_DOUBLE_EQ(k.c, -6.0);
}

TEST(Cloning, SymmetricLineThresholdIsOneQuarter) {
  // On p1 = p2 = p the d = 2 quadratic reduces to 3 - 12 p.
  for (double p : {0.0, 0.1, 0.2, 0.24, 0.26, 0.5, 1.0}) {
    const auto r = region_quadratic_form(CloningPoint(p, p, 2));
    EXPECT_NEAR(r.slack, 3.0 - 12.0 * p, 1e-14);
    EXPECT_EQ(r.satisfied, p >= 0.25) << p;
  }
}

TEST(Cloning, TrivialCornersAreFeasible) {
  // Keep the original (p1 = 0) and discard the copy (p2 = 1), and vice versa.
  for (int d : {2, 3, 4}) {
    EXPECT_TRUE(region_quadratic_form(CloningPoint(0.0, 1.0, d)).satisfied);
    EXPECT_TRUE(region_quadratic_form(CloningPoint(1.0, 0.0, d)).satisfied);
    EXPECT_FALSE(region_quadratic_form(CloningPoint(0.0, 0.0, d)).satisfied);
  }
}

TEST(Cloning, BoundaryRootAtPointTwo) {
  const double expected = (2.4 - std::sqrt(3.2)) / 2.0;
  EXPECT_NEAR(min_feasible_p2(0.2, 2), expected, 1e-12);
  EXPECT_NEAR(expected, 0.305573, 1e-6);
}

TEST(Cloning, MinFeasibleP2MatchesScan) {
  for (double p1 : {0.0, 0.05, 0.2, 0.25, 0.6, 1.0}) {
    const double scanned = oracle::scan_min_p2_d2(p1);
    EXPECT_NEAR(min_feasible_p2(p1, 2), scanned, 1e-6) << p1;
  }
}

TEST(Cloning, MinFeasibleP2HigherDimensionsIsOnBoundary) {
  for (int d : {3, 4}) {
    for (double p1 : {0.1, 0.3, 0.7}) {
      const double p2 = min_feasible_p2(p1, d);
      ASSERT_TRUE(std::isfinite(p2));
      EXPECT_LE(region_quadratic_form(CloningPoint(p1, p2, d)).slack, 1e-9);
      if (p2 > 1e-6) {
        EXPECT_GT(region_quadratic_form(CloningPoint(p1, p2 - 1e-6, d)).slack, 0.0);
      }
    }
  }
}

TEST(Cloning, CloningPointValidatesRange) {
  EXPECT_THROW(CloningPoint(-0.1, 0.5, 2), InvalidInput);
  EXPECT_THROW(CloningPoint(0.1, 1.5, 2), InvalidInput);
  EXPECT_THROW(CloningPoint(0.1, 0.5, 1), InvalidInput);
}

TEST(Cloning, LowerBoundAtBb84Anchor) {
  const auto r = lower_bound_solve(bb84_ensemble(), 0.1, 1.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.p1_cap, 0.2, 1e-12);
  EXPECT_NEAR(r.p1_star, 0.2, 1e-9);
  EXPECT_NEAR(r.p2_star, 0.305573, 1e-6);
  EXPECT_NEAR(r.lower_bits, std::log2(2.0 - (2.4 - std::sqrt(3.2)) / 2.0), 1e-9);
  EXPECT_NEAR(r.lower_bits, 0.7608, 5e-4);
  EXPECT_GE(r.quadratic_slack, -1e-9);
  EXPECT_GE(r.cap_slack, -1e-9);
  EXPECT_TRUE(r.convex);
}

TEST(Cloning, LowerBoundEndpoints) {
  const auto e = bb84_ensemble();
  EXPECT_NEAR(lower_bound_solve(e, 0.0, 1.0).lower_bits, 0.0, 1e-12);
  EXPECT_NEAR(lower_bound_solve(e, 0.5, 1.0).lower_bits, 1.0, 1e-9);
  EXPECT_NEAR(lower_bound_solve(e, 1.0, 1.0).lower_bits, 1.0, 1e-9);
  EXPECT_THROW(lower_bound_solve(e, 1.1, 1.0), InvalidInput);
}

TEST(Cloning, SweepIsMonotone) {
  std::vector<double> alphas;
  for (int i = 0; i <= 100; ++i) alphas.push_back(i / 100.0);
  const auto rows = bound_sweep(bb84_ensemble(), alphas, 1.0);
  ASSERT_EQ(rows.size(), alphas.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].lower_bits, rows[i - 1].lower_bits - 1e-12);
  }
}

TEST(Cloning, SweepCsvFormat) {
  const auto csv = sweep_to_csv(bound_sweep(bb84_ensemble(), {0.1}, 1.0));
  EXPECT_EQ(csv, "alpha,p1,p2,lower_bits\n0.100000,0.200000,0.305573,0.760798\n");
}

TEST(Cloning, DisagreementReportPartitionsDefinedPoints) {
  const auto report = region_disagreement(2, 200);
  EXPECT_EQ(report.points, 200L * 200L);
  EXPECT_GT(report.sqrt_defined, 0);
  EXPECT_EQ(report.agree + report.sqrt_only + report.quadratic_only, report.sqrt_defined);
}

TEST(Cloning, CommutingDetection) {
  EXPECT_FALSE(states_commute(bb84_ensemble()));
  const CqEnsemble diag({"a", "b"}, {0.5, 0.5},
                        {DensityOperator(HermitianMatrix::diagonal(std::vector<double>{1.0, 0.0})),
                         DensityOperator(HermitianMatrix::diagonal(std::vector<double>{0.25, 0.75}))});
  EXPECT_TRUE(states_commute(diag));
}
