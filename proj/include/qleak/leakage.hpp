#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qleak/cloning.hpp"
#include "qleak/measurements.hpp"
#include "qleak/states.hpp"

namespace qleak {

enum class EstimateKind { exact_commuting, optimizer_lower, grid_oracle, analytic, upper_bound };

const char* to_string(EstimateKind kind);

struct OptimizerConfig {
  int starts = 32;
  int evals_per_start = 2000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

struct EstimateMeta {
  int starts = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  int best_start = -1;  // -1: a candidate projective basis won
  int converged_starts = 0;
  bool stagnated = false;
  int grid_resolution = 0;
};

struct LeakageEstimate {
  double bits = 0.0;
  EstimateKind kind = EstimateKind::analytic;
  std::optional<Povm> achieving_povm;
  EstimateMeta meta;
};

// log2 sum_y max_x P[y|x], clamped at 0 against roundoff.
double sibson_infinity(const ConditionalProbabilities& p);

// log2 sum_y max_x tr(rho^x F_y) for a fixed POVM.
double povm_leakage(const CqEnsemble& e, const Povm& f);

// Supremum over POVMs of the Sibson-infinity leakage of the measured
// ensemble. Exact for pairwise-commuting ensembles; otherwise a certified
// lower bound found by multi-start simplex search over rank-one POVMs.
LeakageEstimate maximal_quantum_leakage(const CqEnsemble& e, const OptimizerConfig& config = {});

// Brute-force reference for qubits: scans projective measurements over a
// (theta, phi) grid of the Bloch sphere with resolution x 2 resolution points,
// plus the Z, X and Y bases, then zooms in around the best grid point.
LeakageEstimate mql_grid_oracle_d2(const CqEnsemble& e, int resolution = 721);

// log2(p + (1 - p) 2^base_bits)
double depolarized_leakage(double base_bits, DepolarizingParam p);

// min(log2 |X|, 2 log2 d)
double leakage_upper_bound(const CqEnsemble& e);

enum class LowerWitness { cloning_bound, gentle_povm_search, commuting_states };

const char* to_string(LowerWitness witness);

struct GentleLeakageInterval {
  double lower_bits = 0.0;
  double upper_bits = 0.0;
  LowerWitness lower_witness = LowerWitness::cloning_bound;
  double alpha = 0.0;
  double delta = 0.0;
  double cloning_bits = 0.0;
  double search_bits = 0.0;
  CloningBoundResult cloning;
  std::optional<Povm> search_povm;
};

// Bracket for the weakly gentle leakage: the upper end is the maximal leakage;
// the lower end is the best of the cloning bound and certified gentle POVMs.
GentleLeakageInterval gentle_leakage_interval(const CqEnsemble& e, const GentlenessSpec& spec,
                                              const OptimizerConfig& config = {},
                                              GentlenessMode mode = GentlenessMode::per_state);

}  // namespace qleak
