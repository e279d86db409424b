#include "qleak/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qleak/errors.hpp"
#include "qleak/leakage.hpp"
#include "qleak/random.hpp"

namespace qleak {

namespace {

PovmImplementation identity_instrument() {
  return PovmImplementation({"pass"}, {ComplexMatrix::identity(2)});
}

PovmImplementation random_basis_instrument() {
  // Outcomes (basis, bit) with B = P / sqrt(2): the coin is folded into the
  // instrument so the forwarded state is the collapsed projector.
  const auto z = projective_povm(ComplexMatrix::identity(2));
  const auto x = projective_povm(gates::hadamard());
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> ops;
  for (const auto* basis : {&z, &x}) {
    for (const auto& b : basis->operators()) ops.push_back(Complex(s) * b);
  }
  return PovmImplementation({"z0", "z1", "x0", "x1"}, std::move(ops));
}

double snap_probability(double p) {
  if (p < 1e-15) return 0.0;
  if (p > 1.0 - 1e-15) return 1.0;
  return p;
}

// Per-(x, y) quantities for the BB84 ensemble under an instrument.
struct RoundTable {
  std::vector<std::vector<double>> eve;          // P[y | x]
  std::vector<std::vector<double>> bob_error;    // P[error | x, y]
  std::vector<std::vector<double>> disturbance;  // ||rho' - rho^x||_tr
  double leakage_bits = 0.0;
};

RoundTable build_table(const PovmImplementation& instrument) {
  const auto e = bb84_ensemble();
  const auto probs = born_probabilities(e, instrument.povm());
  const ComplexMatrix z_basis = ComplexMatrix::identity(2);
  const ComplexMatrix x_basis = gates::hadamard();

  RoundTable t;
  t.leakage_bits = sibson_infinity(probs);
  for (std::size_t x = 0; x < e.size(); ++x) {
    const std::string& label = e.labels()[x];
    const auto& basis = label[0] == '0' ? z_basis : x_basis;
    const std::size_t wrong_bit = label[1] == '0' ? 1 : 0;
    const auto wrong = basis.column(wrong_bit);

    std::vector<double> eve_row;
    std::vector<double> err_row;
    std::vector<double> dist_row;
    double total = 0.0;
    for (std::size_t y = 0; y < instrument.size(); ++y) {
      const double p = snap_probability(probs(y, x));
      eve_row.push_back(p);
      total += p;
      if (p <= kNegligibleProbability) {
        err_row.push_back(0.0);
        dist_row.push_back(0.0);
        continue;
      }
      const auto forwarded = post_measurement_state(e.state(x), instrument, y);
      err_row.push_back(snap_probability(expectation(forwarded.hermitian(), wrong)));
      const double dist = trace_distance(forwarded.hermitian(), e.state(x).hermitian());
      dist_row.push_back(dist < 1e-14 ? 0.0 : dist);
    }
    for (auto& p : eve_row) p /= total;
    t.eve.push_back(std::move(eve_row));
    t.bob_error.push_back(std::move(err_row));
    t.disturbance.push_back(std::move(dist_row));
  }
  return t;
}

}  // namespace

HermitianMatrix default_gentle_operator() {
  const double h = 1.0 / std::sqrt(2.0);
  const ComplexVector zero{1.0, 0.0};
  const ComplexVector plus{h, h};
  return positive_part(HermitianMatrix::projector(zero) - HermitianMatrix::projector(plus));
}

EveStrategy::EveStrategy(StrategyKind kind, double epsilon, PovmImplementation instrument)
    : kind_(kind), epsilon_(epsilon), instrument_(std::move(instrument)) {}

EveStrategy EveStrategy::none() { return {StrategyKind::none, 0.0, identity_instrument()}; }

EveStrategy EveStrategy::intercept_z() {
  return {StrategyKind::intercept_z, 0.0, projective_povm(ComplexMatrix::identity(2))};
}

EveStrategy EveStrategy::intercept_random() {
  return {StrategyKind::intercept_random, 0.0, random_basis_instrument()};
}

EveStrategy EveStrategy::intercept_x() {
  return {StrategyKind::intercept_x, 0.0, projective_povm(gates::hadamard())};
}

EveStrategy EveStrategy::gentle(double epsilon, std::optional<HermitianMatrix> m) {
  const auto op = m ? *m : default_gentle_operator();
  if (op.dim() != 2) throw InvalidInput("gentle strategy operator must be 2x2");
  return {StrategyKind::gentle, epsilon, gentle_povm(op, epsilon).implementation};
}

EveStrategy EveStrategy::parse(const std::string& name, double epsilon) {
  if (name == "none") return none();
  if (name == "z") return intercept_z();
  if (name == "w1") return intercept_random();
  if (name == "w2") return intercept_x();
  if (name == "gentle") return gentle(epsilon);
  throw InvalidInput("unknown strategy '" + name + "' (expected none, z, w1, w2 or gentle)");
}

std::string EveStrategy::name() const {
  switch (kind_) {
    case StrategyKind::none: return "none";
    case StrategyKind::intercept_z: return "z";
    case StrategyKind::intercept_random: return "w1";
    case StrategyKind::intercept_x: return "w2";
    case StrategyKind::gentle: return "gentle";
  }
  return "unknown";
}

ExactRoundStatistics exact_round_statistics(const EveStrategy& strategy) {
  const auto t = build_table(strategy.instrument());
  ExactRoundStatistics s;
  s.eve_leakage_bits = t.leakage_bits;
  double second_moment = 0.0;
  const double px = 1.0 / static_cast<double>(t.eve.size());
  for (std::size_t x = 0; x < t.eve.size(); ++x) {
    for (std::size_t y = 0; y < t.eve[x].size(); ++y) {
      const double w = px * t.eve[x][y];
      s.qber += w * t.bob_error[x][y];
      s.mean_disturbance += w * t.disturbance[x][y];
      second_moment += w * t.disturbance[x][y] * t.disturbance[x][y];
    }
  }
  s.disturbance_variance = std::max(0.0, second_moment - s.mean_disturbance * s.mean_disturbance);
  return s;
}

SimReport run_simulation(const EveStrategy& strategy, long rounds, std::uint64_t seed) {
  if (rounds < 1) throw InvalidInput("simulation needs at least one round");
  const auto t = build_table(strategy.instrument());
  const std::size_t n_inputs = t.eve.size();

  SimReport r;
  r.strategy = strategy.name();
  r.epsilon = strategy.epsilon();
  r.rounds = rounds;
  r.seed = seed;
  r.eve_leakage_bits = t.leakage_bits;

  double disturbance_sum = 0.0;
  const long batches = (rounds + kSimulationBatch - 1) / kSimulationBatch;
  for (long b = 0; b < batches; ++b) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<std::size_t> pick_x(0, n_inputs - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long n = std::min(kSimulationBatch, rounds - b * kSimulationBatch);
    long errors = 0;
    double dist = 0.0;
    for (long i = 0; i < n; ++i) {
      const std::size_t x = pick_x(rng);
      const double u = unit(rng);
      std::size_t y = 0;
      double acc = t.eve[x][0];
      while (u >= acc && y + 1 < t.eve[x].size()) acc += t.eve[x][++y];
      // Skip outcomes with zero weight that the cumulative walk may land on.
      while (t.eve[x][y] == 0.0 && y > 0) --y;
      if (unit(rng) < t.bob_error[x][y]) ++errors;
      dist += t.disturbance[x][y];
    }
    r.errors += errors;
    disturbance_sum += dist;
  }
  // Bob is told the basis, so every round is sifted.
  r.sifted = rounds;
  r.qber = static_cast<double>(r.errors) / static_cast<double>(r.sifted);
  r.mean_disturbance = disturbance_sum / static_cast<double>(rounds);
  r.ci95 = 1.96 * std::sqrt(r.qber * (1.0 - r.qber) / static_cast<double>(r.sifted));
  return r;
}

std::vector<TradeoffRow> tradeoff_sweep(const std::vector<double>& epsilons, long rounds,
                                        std::uint64_t seed) {
  std::vector<double> sorted = epsilons;
  std::sort(sorted.begin(), sorted.end());
  std::vector<TradeoffRow> rows;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto strategy = EveStrategy::gentle(sorted[i]);
    const auto report = run_simulation(strategy, rounds, derive_rng(seed, i)());
    rows.push_back({sorted[i], report.qber, report.eve_leakage_bits, report.mean_disturbance});
  }
  return rows;
}

std::string tradeoff_to_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "epsilon,qber,leakage_bits,mean_disturbance\n";
  char line[160];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f\n", row.epsilon, row.qber,
                  row.leakage_bits, row.mean_disturbance);
    out += line;
  }
  return out;
}

}  // namespace qleak
