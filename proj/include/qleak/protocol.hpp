#pragma once

// Monte Carlo model of a BB84 link with an eavesdropper who measures each
// qubit with a fixed instrument and forwards the post-measurement state.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qleak/measurements.hpp"

namespace qleak {

enum class StrategyKind { none, intercept_z, intercept_random, intercept_x, gentle };

class EveStrategy {
 public:
  static EveStrategy none();
  static EveStrategy intercept_z();
  // Coin flip between Z and X basis measurements (W1).
  static EveStrategy intercept_random();
  // Always measure in the X basis (W2).
  static EveStrategy intercept_x();
  // Three-outcome gentle construction; M defaults to the positive part of
  // |0><0| - |+><+|.
  static EveStrategy gentle(double epsilon, std::optional<HermitianMatrix> m = std::nullopt);

  // Names: none, z, w1, w2, gentle.
  static EveStrategy parse(const std::string& name, double epsilon = 0.0);

  StrategyKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  std::string name() const;
  const PovmImplementation& instrument() const { return instrument_; }

 private:
  EveStrategy(StrategyKind kind, double epsilon, PovmImplementation instrument);
  StrategyKind kind_;
  double epsilon_;
  PovmImplementation instrument_;
};

// Default M for the gentle strategy.
HermitianMatrix default_gentle_operator();

struct SimReport {
  std::string strategy;
  double epsilon = 0.0;
  long rounds = 0;
  long sifted = 0;
  long errors = 0;
  double qber = 0.0;
  double eve_leakage_bits = 0.0;
  double mean_disturbance = 0.0;
  double ci95 = 0.0;
  std::uint64_t seed = 0;
};

struct ExactRoundStatistics {
  double qber = 0.0;
  double eve_leakage_bits = 0.0;
  double mean_disturbance = 0.0;
  // Per-round variance of the disturbance, for confidence bands.
  double disturbance_variance = 0.0;
};

// Rounds run in batches of kSimulationBatch with RNG streams derived from
// (seed, batch index), so results do not depend on evaluation order.
inline constexpr long kSimulationBatch = 8192;

SimReport run_simulation(const EveStrategy& strategy, long rounds, std::uint64_t seed);

// Exhaustive enumeration over (x, Eve outcome, Bob outcome).
ExactRoundStatistics exact_round_statistics(const EveStrategy& strategy);

struct TradeoffRow {
  double epsilon;
  double qber;
  double leakage_bits;
  double mean_disturbance;
};

// Gentle strategy at each epsilon; row i uses seed stream (seed, i).
std::vector<TradeoffRow> tradeoff_sweep(const std::vector<double>& epsilons, long rounds,
                                        std::uint64_t seed);

// CSV with header epsilon,qber,leakage_bits,mean_disturbance, 6 decimals.
std::string tradeoff_to_csv(const std::vector<TradeoffRow>& rows);

}  // namespace qleak
