#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qleak/errors.hpp"
#include "qleak/measurements.hpp"
#include "qleak/protocol.hpp"
#include "qleak/random.hpp"

using namespace qleak;

namespace {

oracle::Mat2 to_mat2(const ComplexMatrix& m) {
  return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}

double max_diff(const ComplexMatrix& a, const oracle::Mat2& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a(i, j) - b[i][j]));
  return worst;
}

// Random M with 0 <= M <= I: U diag(u1, u2, ...) U^dagger with u_i uniform.
HermitianMatrix random_effect(std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> diag;
  for (std::size_t i = 0; i < d; ++i) diag.push_back(unit(rng));
  const auto u = random_unitary(d, rng);
  return HermitianMatrix(u * ComplexMatrix::diagonal(diag) * u.adjoint());
}

}  // namespace

TEST(Measurements, BornProbabilitiesOfZOnBb84) {
  const auto z = projective_povm(ComplexMatrix::identity(2));
  const auto p = born_probabilities(bb84_ensemble(), z.povm());
  ASSERT_EQ(p.outcomes(), 2u);
  ASSERT_EQ(p.inputs(), 4u);
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(p(0, 1), 0.0);
  EXPECT_NEAR(p(0, 2), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 3), 0.5, 1e-15);
}

TEST(Measurements, PovmRejectsIncompleteOrNegativeElements) {
  const auto half = HermitianMatrix::identity(2) * 0.5;
  EXPECT_THROW(Povm({"a"}, {half}), InvalidInput);
  const auto neg = HermitianMatrix::diagonal(std::vector<double>{1.5, 1.0});
  const auto comp = HermitianMatrix::diagonal(std::vector<double>{-0.5, 0.0});
  EXPECT_THROW(Povm({"a", "b"}, {neg, comp}), InvalidInput);
  EXPECT_THROW(Povm({"a"}, {HermitianMatrix::identity(2), HermitianMatrix::zero(2)}),
               InvalidInput);
}

TEST(Measurements, ConditionalProbabilitiesValidateColumns) {
  EXPECT_NO_THROW(ConditionalProbabilities({{0.5, 1.0}, {0.5, 0.0}}));
  EXPECT_THROW(ConditionalProbabilities({{0.5, 1.0}, {0.4, 0.0}}), InvalidInput);
  EXPECT_THROW(ConditionalProbabilities({{0.5, 1.0}, {0.5}}), InvalidInput);
}

TEST(Measurements, ImplementationMustMatchPovm) {
  const auto z = projective_povm(ComplexMatrix::identity(2));
  const auto x = projective_povm(gates::hadamard());
  EXPECT_THROW(PovmImplementation(z.povm(), x.operators()), InvalidInput);
  EXPECT_NO_THROW(PovmImplementation(z.povm(), z.operators()));
}

TEST(Measurements, SquareRootImplementationReproducesElements) {
  Rng rng = derive_rng(11, 0);
  const auto m = random_effect(3, rng);
  const Povm povm({"a", "b"}, {m, HermitianMatrix::identity(3) - m});
  const auto impl = PovmImplementation::square_root(povm);
  for (std::size_t y = 0; y < 2; ++y) {
    const auto f = impl.op(y).adjoint() * impl.op(y);
    EXPECT_LT(max_abs_diff(f, povm.element(y).matrix()), 1e-12);
  }
}

TEST(Measurements, PostMeasurementStateOfImpossibleOutcomeFails) {
  const auto z = projective_povm(ComplexMatrix::identity(2));
  const auto zero = DensityOperator::pure(ComplexVector{1.0, 0.0});
  EXPECT_THROW(post_measurement_state(zero, z, 1), PreconditionFailed);
  const auto post = post_measurement_state(zero, z, 0);
  EXPECT_LT(max_abs_diff(post.matrix(), zero.matrix()), 1e-15);
}

TEST(Measurements, IdentityIsAlwaysCertified) {
  const PovmImplementation id({"pass"}, {ComplexMatrix::identity(2)});
  for (double alpha : {0.0, 0.3, 1.0}) {
    for (double delta : {0.0, 0.5, 1.0}) {
      const auto r = certify_gentle(bb84_ensemble(), id, GentlenessSpec(alpha, delta));
      EXPECT_TRUE(r.certified);
      EXPECT_DOUBLE_EQ(r.worst_prob, 1.0);
      EXPECT_LE(r.worst_disturbance, 1e-15);
    }
  }
}

TEST(Measurements, ZMeasurementOnBb84IsNotGentle) {
  const auto z = projective_povm(ComplexMatrix::identity(2));
  const auto r = certify_gentle(bb84_ensemble(), z, GentlenessSpec(0.5, 0.1));
  EXPECT_FALSE(r.certified);
  EXPECT_NEAR(r.worst_disturbance, 1.0 / std::sqrt(2.0), 1e-12);
  // |+> and |-> collapse to |0> or |1>.
  EXPECT_NEAR(r.outcomes[0].disturbance[2], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(std::isnan(r.outcomes[1].disturbance[0]));
  // With alpha above 1/sqrt(2) the same measurement passes.
  EXPECT_TRUE(certify_gentle(bb84_ensemble(), z, GentlenessSpec(0.71, 0.0)).certified);
}

TEST(Measurements, AverageStateModeIsNotMoreConservative) {
  Rng rng = derive_rng(11, 1);
  const auto e = bb84_ensemble();
  for (int trial = 0; trial < 10; ++trial) {
    const auto impl = gentle_povm(random_effect(2, rng), 0.08).implementation;
    const GentlenessSpec spec(0.05, 0.01);
    const auto per = certify_gentle(e, impl, spec, GentlenessMode::per_state);
    const auto avg = certify_gentle(e, impl, spec, GentlenessMode::average_state);
    EXPECT_GE(avg.worst_prob, per.worst_prob - 1e-12);
  }
}

TEST(Measurements, GentleSpecRange) {
  EXPECT_THROW(GentlenessSpec(-0.1, 0.1), InvalidInput);
  EXPECT_THROW(GentlenessSpec(0.1, 1.5), InvalidInput);
  EXPECT_NO_THROW(GentlenessSpec(0.0, 1.0));
}

TEST(Measurements, ModeNamesRoundTrip) {
  for (auto mode : {GentlenessMode::per_state, GentlenessMode::average_state}) {
    EXPECT_EQ(parse_gentleness_mode(to_string(mode)), mode);
  }
  EXPECT_THROW(parse_gentleness_mode("sometimes"), InvalidInput);
}

TEST(GentleConstruction, MatchesQubitOracle) {
  Rng rng = derive_rng(11, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_effect(2, rng);
    const double eps = 0.1 * (trial + 1) / 50.0;
    const auto g = gentle_povm(m, eps);
    const auto expected = oracle::gentle_ops(to_mat2(m.matrix()), eps);
    for (std::size_t y = 0; y < 3; ++y) {
      EXPECT_LT(max_diff(g.implementation.op(y), expected[y]), 1e-12);
    }
  }
}

TEST(GentleConstruction, CompleteAndPositive) {
  Rng rng = derive_rng(11, 3);
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = gentle_povm(random_effect(d, rng), 0.1);
      EXPECT_LE(g.implementation.povm().completeness_residual(), 1e-12);
      for (const auto& f : g.implementation.povm().elements()) EXPECT_GE(min_eigenvalue(f), -1e-12);
      for (const auto& b : g.implementation.operators()) {
        EXPECT_LT(max_abs_diff(b, b.adjoint()), 1e-15);
      }
    }
  }
}

TEST(GentleConstruction, RejectsOutOfRangeInputs) {
  const auto m = HermitianMatrix::diagonal(std::vector<double>{0.5, 0.2});
  EXPECT_THROW(gentle_povm(m, 0.11), InvalidInput);
  EXPECT_THROW(gentle_povm(m, -0.01), InvalidInput);
  EXPECT_THROW(gentle_povm(HermitianMatrix::diagonal(std::vector<double>{1.2, 0.0}), 0.05),
               InvalidInput);
  EXPECT_THROW(gentle_povm(HermitianMatrix::diagonal(std::vector<double>{-0.2, 0.0}), 0.05),
               InvalidInput);
}

TEST(GentleConstruction, DisturbanceMatchesOracle) {
  const auto e = bb84_ensemble();
  const auto m = default_gentle_operator();
  const auto states = oracle::bb84_states();
  for (double eps : {0.01, 0.05, 0.1}) {
    const auto g = gentle_povm(m, eps);
    const auto ops = oracle::gentle_ops(oracle::default_gentle_m(), eps);
    const auto report = certify_gentle(e, g.implementation, GentlenessSpec(1.0, 0.0));
    for (std::size_t y = 0; y < 3; ++y) {
      for (std::size_t x = 0; x < 4; ++x) {
        const auto unnorm = oracle::mul(oracle::mul(ops[y], states[x]), ops[y]);
        const double p = oracle::trace(unnorm);
        EXPECT_NEAR(report.outcomes[y].probability[x], p, 1e-13);
        if (p <= kNegligibleProbability) continue;
        const double d = oracle::trace_distance(oracle::scale(unnorm, 1.0 / p), states[x]);
        EXPECT_NEAR(report.outcomes[y].disturbance[x], d, 1e-11) << "y=" << y << " x=" << x;
      }
    }
  }
}

TEST(GentleConstruction, FirstOrderExpansionUsesMinusSign) {
  // The +/- outcome disturbance divided by the first-order prediction tends
  // to 1 as eps -> 0 with the normalized sign.
  Rng rng = derive_rng(11, 4);
  const auto m = random_effect(2, rng);
  const auto rho = DensityOperator(random_density(2, 1, rng));
  const CqEnsemble single({"x"}, {1.0}, {rho});
  const double eps = 1e-4;
  const auto report =
      certify_gentle(single, gentle_povm(m, eps).implementation, GentlenessSpec(1.0, 0.0));
  const double actual = report.outcomes[0].disturbance[0];
  const double predicted = gentle_first_order_disturbance(m, rho, eps);
  EXPECT_NEAR(actual / predicted, 1.0, 1e-3);
  const double plus_sign = gentle_first_order_disturbance(m, rho, eps, true);
  EXPECT_GT(std::abs(actual / plus_sign - 1.0), 1e-2);
}

TEST(GentleConstruction, EpsilonPrimeIsCertified) {
  const auto e = bb84_ensemble();
  const auto m = default_gentle_operator();
  const GentlenessSpec spec(0.1, 0.05);
  const auto ep = epsilon_prime(m, spec, e);
  EXPECT_GT(ep.epsilon, 0.0);
  EXPECT_LE(ep.epsilon, kMaxGentleEpsilon);
  EXPECT_TRUE(certify_gentle(e, gentle_povm(m, ep.epsilon).implementation, spec).certified);
  const auto capped = epsilon_prime(m, spec, e, GentlenessMode::per_state, true);
  EXPECT_LE(capped.epsilon, capped.analytic_cap);
  EXPECT_LE(capped.epsilon, ep.epsilon);
}

TEST(GentleConstruction, PositivePartOfProjectorDifference) {
  // L+(|0><0| - |+><+|) has eigenvalue sin(pi/4) = 1/sqrt(2) and rank one.
  const auto m = default_gentle_operator();
  const auto vals = eigenvalues(m);
  EXPECT_NEAR(vals[0], 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(vals[1], 0.0, 1e-14);
  EXPECT_LT(max_diff(m.matrix(), oracle::default_gentle_m()), 1e-14);
}
