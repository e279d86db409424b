#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qleak/errors.hpp"
#include "qleak/leakage.hpp"
#include "qleak/random.hpp"

using namespace qleak;

namespace {

OptimizerConfig quick_config() {
  OptimizerConfig c;
  c.starts = 8;
  c.evals_per_start = 1500;
  return c;
}

CqEnsemble random_pair(std::size_t d, Rng& rng) {
  return CqEnsemble({"a", "b"}, {0.5, 0.5},
                    {DensityOperator(random_density(d, 1 + rng() % d, rng)),
                     DensityOperator(random_density(d, 1 + rng() % d, rng))});
}

// Two equiprobable states: sum_y max(a_y, b_y) = 1 + (1/2) sum_y |a_y - b_y|,
// maximized by the Helstrom measurement at 1 + T(rho0, rho1).
double two_state_leakage(const CqEnsemble& e) {
  return std::log2(1.0 + trace_distance(e.state(0).hermitian(), e.state(1).hermitian()));
}

}  // namespace

TEST(Leakage, SibsonOfIdentityAndConstantChannels) {
  EXPECT_NEAR(sibson_infinity(ConditionalProbabilities({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})),
              std::log2(3.0), 1e-15);
  EXPECT_DOUBLE_EQ(sibson_infinity(ConditionalProbabilities({{0.3, 0.3}, {0.7, 0.7}})), 0.0);
}

TEST(Leakage, CommutingEnsembleIsExact) {
  const CqEnsemble e({"a", "b"}, {0.5, 0.5},
                     {DensityOperator(HermitianMatrix::diagonal(std::vector<double>{1.0, 0.0})),
                      DensityOperator(HermitianMatrix::diagonal(std::vector<double>{0.25, 0.75}))});
  const auto est = maximal_quantum_leakage(e);
  EXPECT_EQ(est.kind, EstimateKind::exact_commuting);
  EXPECT_NEAR(est.bits, std::log2(1.75), 1e-12);
  EXPECT_NEAR(est.bits, 0.80735, 1e-5);
  ASSERT_TRUE(est.achieving_povm.has_value());
  EXPECT_NEAR(povm_leakage(e, *est.achieving_povm), est.bits, 1e-12);
}

TEST(Leakage, IdenticalStatesLeakNothing) {
  Rng rng = derive_rng(5, 0);
  const DensityOperator rho(random_density(3, 2, rng));
  const CqEnsemble e({"a", "b", "c"}, {0.2, 0.3, 0.5}, {rho, rho, rho});
  EXPECT_EQ(maximal_quantum_leakage(e).bits, 0.0);
}

TEST(Leakage, Bb84OptimizerAndOracle) {
  const auto e = bb84_ensemble();
  const auto est = maximal_quantum_leakage(e);
  EXPECT_EQ(est.kind, EstimateKind::optimizer_lower);
  EXPECT_NEAR(est.bits, 1.0, 1e-3);
  EXPECT_LE(est.bits, 1.0 + 1e-9);
  ASSERT_TRUE(est.achieving_povm.has_value());
  EXPECT_LE(est.achieving_povm->completeness_residual(), 1e-9);
  EXPECT_NEAR(povm_leakage(e, *est.achieving_povm), est.bits, 1e-12);

  const auto grid = mql_grid_oracle_d2(e);
  EXPECT_EQ(grid.kind, EstimateKind::grid_oracle);
  EXPECT_GE(grid.bits, 1.0 - 1e-6);
  EXPECT_LE(grid.bits, 1.0 + 1e-12);
}

TEST(Leakage, OptimizerIsDeterministic) {
  const auto e = bb84_ensemble();
  const auto a = maximal_quantum_leakage(e, quick_config());
  const auto b = maximal_quantum_leakage(e, quick_config());
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_EQ(a.meta.evaluations, b.meta.evaluations);
  EXPECT_EQ(a.meta.best_start, b.meta.best_start);
}

TEST(Leakage, TwoStateEnsemblesMatchHelstromOracle) {
  Rng rng = derive_rng(5, 1);
  for (int trial = 0; trial < 6; ++trial) {
    const auto e = random_pair(2, rng);
    const double expected = two_state_leakage(e);
    EXPECT_NEAR(mql_grid_oracle_d2(e, 181).bits, expected, 1e-6) << trial;
    const auto est = maximal_quantum_leakage(e, quick_config());
    EXPECT_NEAR(est.bits, expected, 2e-3) << trial;
    EXPECT_LE(est.bits, expected + 1e-9) << trial;
  }
  for (int trial = 0; trial < 3; ++trial) {
    const auto e = random_pair(3, rng);
    const auto est = maximal_quantum_leakage(e, quick_config());
    EXPECT_NEAR(est.bits, two_state_leakage(e), 2e-3) << trial;
  }
}

TEST(Leakage, DepolarizedClosedForm) {
  EXPECT_DOUBLE_EQ(depolarized_leakage(1.0, DepolarizingParam(1.0)), 0.0);
  EXPECT_DOUBLE_EQ(depolarized_leakage(1.0, DepolarizingParam(0.0)), 1.0);
  EXPECT_NEAR(depolarized_leakage(1.0, DepolarizingParam(0.5)), std::log2(1.5), 1e-15);
}

TEST(Leakage, DepolarizedBb84MatchesClosedForm) {
  const auto e = bb84_ensemble();
  for (double p : {0.25, 0.75}) {
    const auto noisy = depolarize(e, DepolarizingParam(p));
    EXPECT_NEAR(mql_grid_oracle_d2(noisy, 181).bits, std::log2(p + (1 - p) * 2), 1e-6);
  }
  EXPECT_EQ(maximal_quantum_leakage(depolarize(e, DepolarizingParam(1.0))).bits, 0.0);
}

TEST(Leakage, UpperBound) {
  EXPECT_DOUBLE_EQ(leakage_upper_bound(bb84_ensemble()), 2.0);
  const CqEnsemble two({"a", "b"}, {0.5, 0.5},
                       {DensityOperator::maximally_mixed(4), DensityOperator::maximally_mixed(4)});
  EXPECT_DOUBLE_EQ(leakage_upper_bound(two), 1.0);
}

TEST(Leakage, GridOracleRejectsNonQubits) {
  Rng rng = derive_rng(5, 2);
  EXPECT_THROW(mql_grid_oracle_d2(random_pair(3, rng)), InvalidInput);
}

TEST(Leakage, InvariantUnderUnitaries) {
  Rng rng = derive_rng(5, 3);
  const auto e = bb84_ensemble();
  for (int trial = 0; trial < 3; ++trial) {
    const auto rotated = apply_unitary(e, random_unitary(2, rng));
    EXPECT_NEAR(mql_grid_oracle_d2(rotated).bits, 1.0, 1e-6);
  }
}

TEST(Leakage, GentleIntervalBracketsCloningBound) {
  const auto e = bb84_ensemble();
  const auto interval = gentle_leakage_interval(e, GentlenessSpec(0.1, 0.05), quick_config());
  EXPECT_LE(interval.lower_bits, interval.upper_bits + 1e-12);
  EXPECT_GE(interval.lower_bits, 0.7608 - 5e-4);
  EXPECT_NEAR(interval.cloning_bits, interval.cloning.lower_bits, 0.0);
  EXPECT_NEAR(interval.upper_bits, 1.0, 1e-3);
}

TEST(Leakage, GentleIntervalForCommutingStatesIsTight) {
  const CqEnsemble e({"a", "b"}, {0.5, 0.5},
                     {DensityOperator(HermitianMatrix::diagonal(std::vector<double>{1.0, 0.0})),
                      DensityOperator(HermitianMatrix::diagonal(std::vector<double>{0.25, 0.75}))});
  const auto interval = gentle_leakage_interval(e, GentlenessSpec(0.0, 0.0), quick_config());
  EXPECT_EQ(interval.lower_witness, LowerWitness::commuting_states);
  EXPECT_NEAR(interval.lower_bits, interval.upper_bits, 1e-12);
}

TEST(LeakageProperties, DepolarizingNeverIncreasesLeakage) {
  Rng rng = derive_rng(5, 4);
  for (int trial = 0; trial < 4; ++trial) {
    const auto e = random_pair(2, rng);
    double prev = mql_grid_oracle_d2(e, 181).bits;
    for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      const double bits = mql_grid_oracle_d2(depolarize(e, DepolarizingParam(p)), 181).bits;
      EXPECT_LE(bits, prev + 1e-9) << p;
      prev = bits;
    }
  }
}

TEST(LeakageProperties, EstimatesRespectUpperBound) {
  Rng rng = derive_rng(5, 5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = 2 + trial % 2;
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::vector<DensityOperator> states;
    const std::size_t n = 2 + trial;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i));
      probs.push_back(1.0 / static_cast<double>(n));
      states.emplace_back(random_pure_state(d, rng));
    }
    const CqEnsemble e(labels, probs, states);
    const auto est = maximal_quantum_leakage(e, quick_config());
    EXPECT_LE(est.bits, leakage_upper_bound(e) + 1e-9);
    EXPECT_GE(est.bits, 0.0);
  }
}

TEST(LeakageProperties, RelabelingInputsDoesNotChangeLeakage) {
  const auto e = bb84_ensemble();
  const CqEnsemble shuffled({"a", "b", "c", "d"}, {0.25, 0.25, 0.25, 0.25},
                            {e.state(2), e.state(0), e.state(3), e.state(1)});
  EXPECT_NEAR(mql_grid_oracle_d2(shuffled).bits, mql_grid_oracle_d2(e).bits, 1e-12);
}
