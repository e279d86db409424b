// qleak: command-line front end for the leakage library.
//
// Exit codes: 0 success, 2 invalid input, 3 precondition failure,
// 4 numerical non-convergence.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qleak/cloning.hpp"
#include "qleak/errors.hpp"
#include "qleak/io.hpp"
#include "qleak/leakage.hpp"
#include "qleak/measurements.hpp"
#include "qleak/protocol.hpp"
#include "qleak/states.hpp"

namespace {

using namespace qleak;

constexpr int kExitInvalid = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNotConverged = 4;

struct Options {
  std::string ensemble;
  std::string povm;
  std::string out;
  std::uint64_t seed = 42;
  int starts = OptimizerConfig{}.starts;
  int evals = OptimizerConfig{}.evals_per_start;
  std::vector<double> alpha;
  double delta = 0.0;
  std::vector<double> p;
  std::vector<double> epsilon;
  std::string mode = "per-state";
  int grid = 0;
  long rounds = 100000;
  std::string strategy = "none";
  std::vector<std::size_t> pair{0, 1};
  int dim = 2;
};

OptimizerConfig optimizer(const Options& o) {
  OptimizerConfig c;
  c.starts = o.starts;
  c.evals_per_start = o.evals;
  c.seed = o.seed;
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(o.out, text);
  }
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void require_unit(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw InvalidInput(std::string("--") + name + " needs at least one value");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput(std::string("--") + name + " values must lie in [0, 1], got " +
                         std::to_string(v));
    }
  }
}

int cmd_leakage(const Options& o) {
  const auto e = load_ensemble(o.ensemble);
  emit_json(o, to_json(maximal_quantum_leakage(e, optimizer(o))));
  return 0;
}

int cmd_oracle(const Options& o) {
  const auto e = load_ensemble(o.ensemble);
  emit_json(o, to_json(mql_grid_oracle_d2(e, o.grid > 0 ? o.grid : 721)));
  return 0;
}

std::vector<double> alpha_grid(int n) {
  if (n < 2) throw InvalidInput("--grid must be at least 2");
  std::vector<double> alphas;
  for (int i = 0; i < n; ++i) alphas.push_back(static_cast<double>(i) / (n - 1));
  return alphas;
}

int cmd_lower_bound(const Options& o) {
  require_unit(o.alpha, "alpha");
  const auto e = load_ensemble(o.ensemble);
  const double q = maximal_quantum_leakage(e, optimizer(o)).bits;
  emit(o, sweep_to_csv(bound_sweep(e, o.alpha, q)));
  return 0;
}

int cmd_figure2(const Options& o) {
  const auto alphas = alpha_grid(o.grid > 0 ? o.grid : 101);
  const auto e = load_ensemble(o.ensemble);
  const double q = maximal_quantum_leakage(e, optimizer(o)).bits;
  emit(o, sweep_to_csv(bound_sweep(e, alphas, q)));
  return 0;
}

int cmd_certify(const Options& o) {
  if (o.alpha.size() != 1) throw InvalidInput("--alpha takes exactly one value here");
  const auto e = load_ensemble(o.ensemble);
  const auto file = load_povm(o.povm);
  if (!file.implementation) {
    throw PreconditionFailed(o.povm + ": certification needs an \"implementation\" field");
  }
  const GentlenessSpec spec(o.alpha.front(), o.delta);
  emit_json(o, to_json(certify_gentle(e, *file.implementation, spec,
                                      parse_gentleness_mode(o.mode))));
  return 0;
}

int cmd_interval(const Options& o) {
  if (o.alpha.size() != 1) throw InvalidInput("--alpha takes exactly one value here");
  const auto e = load_ensemble(o.ensemble);
  const GentlenessSpec spec(o.alpha.front(), o.delta);
  emit_json(o, to_json(gentle_leakage_interval(e, spec, optimizer(o),
                                               parse_gentleness_mode(o.mode))));
  return 0;
}

int cmd_depolarize(const Options& o) {
  require_unit(o.p, "p");
  const auto e = load_ensemble(o.ensemble);
  const double base = maximal_quantum_leakage(e, optimizer(o)).bits;
  std::string csv = "p,leakage_bits,closed_form_bits\n";
  for (double p : o.p) {
    const DepolarizingParam param(p);
    const double bits = maximal_quantum_leakage(depolarize(e, param), optimizer(o)).bits;
    csv += fixed6(p) + "," + fixed6(bits) + "," + fixed6(depolarized_leakage(base, param)) + "\n";
  }
  emit(o, csv);
  return 0;
}

int cmd_simulate(const Options& o) {
  if (o.epsilon.size() > 1) throw InvalidInput("--epsilon takes one value for simulate");
  const double eps = o.epsilon.empty() ? 0.05 : o.epsilon.front();
  const auto strategy = EveStrategy::parse(o.strategy, eps);
  json j = to_json(run_simulation(strategy, o.rounds, o.seed));
  j["exact"] = to_json(exact_round_statistics(strategy));
  emit_json(o, j);
  return 0;
}

int cmd_tradeoff(const Options& o) {
  std::vector<double> eps = o.epsilon;
  if (eps.empty()) {
    for (int i = 0; i <= 10; ++i) eps.push_back(0.01 * i);
  }
  emit(o, tradeoff_to_csv(tradeoff_sweep(eps, o.rounds, o.seed)));
  return 0;
}

int cmd_gentle_povm(const Options& o) {
  const auto e = load_ensemble(o.ensemble);
  if (o.pair.size() != 2 || o.pair[0] >= e.size() || o.pair[1] >= e.size() ||
      o.pair[0] == o.pair[1]) {
    throw InvalidInput("--pair needs two distinct state indices below " +
                       std::to_string(e.size()));
  }
  const auto m = positive_part(e.state(o.pair[0]).hermitian() - e.state(o.pair[1]).hermitian());
  double eps = 0.0;
  if (!o.epsilon.empty()) {
    if (o.epsilon.size() != 1) throw InvalidInput("--epsilon takes one value here");
    eps = o.epsilon.front();
  } else {
    if (o.alpha.size() != 1) {
      throw InvalidInput("give --epsilon, or --alpha and --delta to pick the largest certified epsilon");
    }
    eps = epsilon_prime(m, GentlenessSpec(o.alpha.front(), o.delta), e,
                        parse_gentleness_mode(o.mode))
              .epsilon;
  }
  const auto g = gentle_povm(m, eps);
  json j = to_json(g.implementation.povm(), &g.implementation);
  j["epsilon"] = eps;
  emit_json(o, j);
  return 0;
}

int cmd_region(const Options& o) {
  emit_json(o, to_json(region_disagreement(o.dim, o.grid > 0 ? o.grid : 200)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal and gentle quantum leakage of classical-quantum ensembles"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write output to this file instead of stdout");
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  auto budget = [&](CLI::App* sub) {
    sub->add_option("--starts", o.starts, "Optimizer random starts")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--evals", o.evals, "Objective evaluations per start")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  };
  auto ensemble = [&](CLI::App* sub) {
    sub->add_option("ensemble", o.ensemble, "Ensemble JSON file")->required();
  };
  auto gentleness = [&](CLI::App* sub, bool alpha_required) {
    auto* a = sub->add_option("--alpha", o.alpha, "Disturbance bound alpha")->delimiter(',');
    if (alpha_required) a->required();
    sub->add_option("--delta", o.delta, "Failure probability delta")->capture_default_str();
    sub->add_option("--mode", o.mode, "per-state or average-state")->capture_default_str();
  };

  auto* leakage = app.add_subcommand("leakage", "Maximal quantum leakage (optimizer)");
  ensemble(leakage);
  common(leakage);
  budget(leakage);

  auto* oracle = app.add_subcommand("oracle", "Qubit grid-scan reference for the maximal leakage");
  ensemble(oracle);
  common(oracle);
  oracle->add_option("--grid", o.grid, "Polar resolution (default 721)");

  auto* lower = app.add_subcommand("lower-bound", "Cloning lower bound on gentle leakage (CSV)");
  ensemble(lower);
  common(lower);
  budget(lower);
  lower->add_option("--alpha", o.alpha, "Comma-separated alpha values")
      ->delimiter(',')
      ->required();

  auto* fig = app.add_subcommand("figure2", "Lower bound over an evenly spaced alpha grid (CSV)");
  ensemble(fig);
  common(fig);
  budget(fig);
  fig->add_option("--grid", o.grid, "Number of alpha points on [0, 1] (default 101)");

  auto* certify = app.add_subcommand("certify", "Check a POVM implementation for gentleness");
  ensemble(certify);
  certify->add_option("povm", o.povm, "POVM JSON file")->required();
  common(certify);
  gentleness(certify, true);

  auto* interval = app.add_subcommand("interval", "Bracket the gentle leakage");
  ensemble(interval);
  common(interval);
  budget(interval);
  gentleness(interval, true);

  auto* depol = app.add_subcommand("depolarize", "Leakage after global depolarizing noise (CSV)");
  ensemble(depol);
  common(depol);
  budget(depol);
  depol->add_option("--p", o.p, "Comma-separated noise strengths")->delimiter(',')->required();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo BB84 run with an eavesdropper");
  common(sim);
  sim->add_option("--strategy", o.strategy, "none, z, w1, w2 or gentle")->capture_default_str();
  sim->add_option("--rounds", o.rounds, "Number of rounds")->capture_default_str();
  sim->add_option("--epsilon", o.epsilon, "Gentle strength (gentle strategy only)");

  auto* tradeoff = app.add_subcommand("tradeoff", "QBER and leakage of the gentle attack (CSV)");
  common(tradeoff);
  tradeoff->add_option("--epsilon", o.epsilon, "Comma-separated epsilons (default 0..0.1)")
      ->delimiter(',');
  tradeoff->add_option("--rounds", o.rounds, "Rounds per epsilon")->capture_default_str();

  auto* gpovm = app.add_subcommand("gentle-povm", "Three-outcome gentle POVM from a state pair");
  ensemble(gpovm);
  common(gpovm);
  gentleness(gpovm, false);
  gpovm->add_option("--epsilon", o.epsilon, "Strength; omit to use the largest certified value");
  gpovm->add_option("--pair", o.pair, "State indices i,j for M = positive part of rho_i - rho_j")
      ->delimiter(',');

  auto* region = app.add_subcommand("region", "Compare the two cloning-region descriptions");
  common(region);
  region->add_option("--d", o.dim, "Dimension")->capture_default_str();
  region->add_option("--grid", o.grid, "Grid points per axis (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (leakage->parsed()) return cmd_leakage(o);
    if (oracle->parsed()) return cmd_oracle(o);
    if (lower->parsed()) return cmd_lower_bound(o);
    if (fig->parsed()) return cmd_figure2(o);
    if (certify->parsed()) return cmd_certify(o);
    if (interval->parsed()) return cmd_interval(o);
    if (depol->parsed()) return cmd_depolarize(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (tradeoff->parsed()) return cmd_tradeoff(o);
    if (gpovm->parsed()) return cmd_gentle_povm(o);
    if (region->parsed()) return cmd_region(o);
  } catch (const InvalidInput& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  } catch (const PreconditionFailed& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitPrecondition;
  } catch (const NotConverged& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNotConverged;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
