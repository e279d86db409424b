#include "qleak/leakage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qleak/errors.hpp"
#include "qleak/nelder_mead.hpp"
#include "qleak/random.hpp"

namespace qleak {

const char* to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::exact_commuting: return "exact-commuting";
    case EstimateKind::optimizer_lower: return "optimizer-lower";
    case EstimateKind::grid_oracle: return "grid-oracle";
    case EstimateKind::analytic: return "analytic";
    case EstimateKind::upper_bound: return "upper-bound";
  }
  return "unknown";
}

const char* to_string(LowerWitness witness) {
  switch (witness) {
    case LowerWitness::cloning_bound: return "cloning-bound";
    case LowerWitness::gentle_povm_search: return "gentle-povm-search";
    case LowerWitness::commuting_states: return "commuting-states";
  }
  return "unknown";
}

double sibson_infinity(const ConditionalProbabilities& p) {
  double total = 0.0;
  for (std::size_t y = 0; y < p.outcomes(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < p.inputs(); ++x) best = std::max(best, p(y, x));
    total += best;
  }
  return std::max(0.0, std::log2(total));
}

double povm_leakage(const CqEnsemble& e, const Povm& f) {
  return sibson_infinity(born_probabilities(e, f));
}

double leakage_upper_bound(const CqEnsemble& e) {
  return std::min(std::log2(static_cast<double>(e.size())),
                  2.0 * std::log2(static_cast<double>(e.dim())));
}

double depolarized_leakage(double base_bits, DepolarizingParam p) {
  if (!(base_bits >= 0.0)) throw InvalidInput("base leakage must be non-negative");
  const double q = p.value();
  return std::max(0.0, std::log2(q + (1.0 - q) * std::exp2(base_bits)));
}

namespace {

Povm projective_elements(const ComplexMatrix& basis) {
  return projective_povm(basis).povm();
}

// Eigenbases worth trying directly: each state, each pairwise difference, and
// the computational basis.
std::vector<ComplexMatrix> candidate_bases(const CqEnsemble& e) {
  std::vector<ComplexMatrix> out{ComplexMatrix::identity(e.dim())};
  for (std::size_t x = 0; x < e.size(); ++x) {
    out.push_back(eig_hermitian(e.state(x).hermitian()).vectors);
    for (std::size_t x2 = x + 1; x2 < e.size(); ++x2) {
      out.push_back(eig_hermitian(e.state(x).hermitian() - e.state(x2).hermitian()).vectors);
    }
  }
  return out;
}

std::optional<LeakageEstimate> commuting_exact(const CqEnsemble& e) {
  if (!states_commute(e)) return std::nullopt;
  const std::size_t d = e.dim();
  const bool identical = std::all_of(e.states().begin(), e.states().end(), [&](const auto& rho) {
    return max_abs_diff(rho.matrix(), e.state(0).matrix()) <= 1e-12;
  });
  if (identical) {
    // No measurement distinguishes the inputs; avoid roundoff in log2(sum).
    LeakageEstimate est;
    est.kind = EstimateKind::exact_commuting;
    est.bits = 0.0;
    est.achieving_povm = Povm({"0"}, {HermitianMatrix::identity(d)});
    return est;
  }
  for (int attempt = 0; attempt < 3; ++attempt) {
    // Generic weights separate the joint eigenspaces.
    auto combo = HermitianMatrix::zero(d);
    for (std::size_t x = 0; x < e.size(); ++x) {
      const double w = 1.0 + std::fmod(0.7548776662466927 * static_cast<double>(x + 1 + 7 * attempt),
                                       1.0);
      combo = combo + e.state(x).hermitian() * w;
    }
    const auto basis = eig_hermitian(combo).vectors;
    const auto basis_adj = basis.adjoint();
    bool diagonal = true;
    std::vector<double> best(d, 0.0);
    for (const auto& rho : e.states()) {
      const auto rotated = basis_adj * rho.matrix() * basis;
      for (std::size_t i = 0; i < d && diagonal; ++i) {
        best[i] = std::max(best[i], rotated(i, i).real());
        for (std::size_t j = 0; j < d; ++j) {
          if (i != j && std::abs(rotated(i, j)) > 1e-8) diagonal = false;
        }
      }
    }
    if (!diagonal) continue;
    double total = 0.0;
    for (double b : best) total += b;
    LeakageEstimate est;
    est.kind = EstimateKind::exact_commuting;
    est.bits = std::clamp(std::log2(total), 0.0, leakage_upper_bound(e));
    est.achieving_povm = projective_elements(basis);
    return est;
  }
  return std::nullopt;
}

// Rank-one POVM parameterization: m unnormalized vectors v_y mapped to
// F_y = G^{-1/2} v_y v_y^dagger G^{-1/2}, G = sum_y v_y v_y^dagger.
class RankOnePovmMap {
 public:
  RankOnePovmMap(std::size_t dim, std::size_t outcomes) : d_(dim), m_(outcomes) {}

  std::size_t parameter_count() const { return 2 * d_ * m_; }

  std::vector<ComplexVector> normalized(std::span<const double> params, double reg) const {
    std::vector<ComplexVector> v(m_, ComplexVector(d_));
    ComplexMatrix gram(d_);
    for (std::size_t y = 0; y < m_; ++y) {
      for (std::size_t i = 0; i < d_; ++i) {
        v[y][i] = Complex(params[2 * (y * d_ + i)], params[2 * (y * d_ + i) + 1]);
      }
      for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = 0; j < d_; ++j) gram(i, j) += v[y][i] * std::conj(v[y][j]);
      }
    }
    for (std::size_t i = 0; i < d_; ++i) gram(i, i) += reg;
    const auto inv_sqrt = apply_function(HermitianMatrix(gram, 1e-8), [](double l) {
      return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0;
    });
    std::vector<ComplexVector> w;
    w.reserve(m_);
    for (const auto& vy : v) w.push_back(inv_sqrt.matrix() * vy);
    return w;
  }

  std::vector<double> from_basis(const ComplexMatrix& basis, double filler, Rng& rng) const {
    std::vector<double> params(parameter_count());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t y = 0; y < m_; ++y) {
      for (std::size_t i = 0; i < d_; ++i) {
        Complex z = y < d_ ? basis(i, y) : Complex(filler * normal(rng), filler * normal(rng));
        params[2 * (y * d_ + i)] = z.real();
        params[2 * (y * d_ + i) + 1] = z.imag();
      }
    }
    return params;
  }

 private:
  std::size_t d_;
  std::size_t m_;
};

double rank_one_objective(const CqEnsemble& e, const std::vector<ComplexVector>& w) {
  double total = 0.0;
  for (const auto& wy : w) {
    double best = 0.0;
    for (const auto& rho : e.states()) best = std::max(best, expectation(rho.hermitian(), wy));
    total += best;
  }
  return total;
}

std::optional<Povm> rank_one_povm(const RankOnePovmMap& map, std::span<const double> params) {
  try {
    auto w = map.normalized(params, 0.0);
    std::vector<std::string> labels;
    std::vector<HermitianMatrix> elements;
    for (std::size_t y = 0; y < w.size(); ++y) {
      labels.push_back(std::to_string(y));
      elements.push_back(HermitianMatrix(ComplexMatrix::outer(w[y]), 1e-8));
    }
    return Povm(std::move(labels), std::move(elements));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

LeakageEstimate maximal_quantum_leakage(const CqEnsemble& e, const OptimizerConfig& config) {
  if (config.starts < 0 || config.evals_per_start < 0) {
    throw InvalidInput("optimizer budget must be non-negative");
  }
  if (auto exact = commuting_exact(e)) return *exact;

  const double cap = leakage_upper_bound(e);
  LeakageEstimate est;
  est.kind = EstimateKind::optimizer_lower;
  est.meta.starts = config.starts;
  est.meta.seed = config.seed;

  // Candidate projective bases.
  double best_bits = -1.0;
  ComplexMatrix best_basis = ComplexMatrix::identity(e.dim());
  for (const auto& basis : candidate_bases(e)) {
    auto povm = projective_elements(basis);
    const double bits = povm_leakage(e, povm);
    if (bits > best_bits) {
      best_bits = bits;
      best_basis = basis;
      est.achieving_povm = std::move(povm);
    }
  }

  const std::size_t d = e.dim();
  const RankOnePovmMap map(d, d * d);
  auto objective = [&](std::span<const double> params) {
    return -rank_one_objective(e, map.normalized(params, 1e-12));
  };

  for (int start = 0; start < config.starts; ++start) {
    Rng rng = derive_rng(config.seed, static_cast<std::uint64_t>(start));
    std::vector<double> x;
    if (start == 0) {
      x = map.from_basis(best_basis, 1e-3, rng);
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      x.resize(map.parameter_count());
      for (auto& v : x) v = normal(rng);
    }

    int remaining = config.evals_per_start;
    double step = start == 0 ? 0.05 : 0.5;
    double previous = std::numeric_limits<double>::infinity();
    bool converged = false;
    NelderMeadResult res{x, objective(x), 0, false};
    while (remaining > 0) {
      NelderMeadOptions opts;
      opts.max_evals = remaining;
      opts.ftol = config.tol;
      opts.initial_step = step;
      res = nelder_mead_minimize(objective, res.x, opts);
      remaining -= res.evals;
      est.meta.evaluations += res.evals;
      converged = res.converged;
      // Restart from the converged point until restarts stop paying off.
      if (!res.converged || previous - res.value <= config.tol) break;
      previous = res.value;
      step *= 0.25;
    }
    if (converged) ++est.meta.converged_starts;

    if (auto povm = rank_one_povm(map, res.x)) {
      const double bits = povm_leakage(e, *povm);
      if (bits > best_bits) {
        best_bits = bits;
        est.achieving_povm = std::move(povm);
        est.meta.best_start = start;
      }
    }
  }

  est.meta.stagnated = config.starts > 0 && est.meta.converged_starts == 0;
  est.bits = std::clamp(best_bits, 0.0, cap);
  return est;
}

LeakageEstimate mql_grid_oracle_d2(const CqEnsemble& e, int resolution) {
  if (e.dim() != 2) throw InvalidInput("grid oracle requires qubit (d = 2) ensembles");
  if (resolution < 2) throw InvalidInput("grid resolution must be >= 2");

  std::vector<std::array<double, 3>> bloch;
  for (const auto& rho : e.states()) {
    const Complex off = rho.matrix()(0, 1);
    bloch.push_back({2.0 * off.real(), -2.0 * off.imag(),
                     rho.matrix()(0, 0).real() - rho.matrix()(1, 1).real()});
  }
  auto score_direction = [&](double nx, double ny, double nz) {
    double up = 0.0;
    double down = 0.0;
    for (const auto& r : bloch) {
      const double proj = r[0] * nx + r[1] * ny + r[2] * nz;
      up = std::max(up, 0.5 * (1.0 + proj));
      down = std::max(down, 0.5 * (1.0 - proj));
    }
    return up + down;
  };
  auto score = [&](double theta, double phi) {
    return score_direction(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                           std::cos(theta));
  };

  const double pi = std::numbers::pi;
  double best_theta = 0.0;
  double best_phi = 0.0;
  double best = score(0.0, 0.0);
  auto consider = [&](double theta, double phi) {
    const double s = score(theta, phi);
    if (s > best) {
      best = s;
      best_theta = theta;
      best_phi = phi;
    }
  };
  // Exact Z, X and Y bases.
  consider(pi / 2, 0.0);
  consider(pi / 2, pi / 2);

  const double d_theta = pi / (resolution - 1);
  const double d_phi = 2.0 * pi / (2 * resolution);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < 2 * resolution; ++j) consider(i * d_theta, j * d_phi);
  }

  double span_theta = 2.0 * d_theta;
  double span_phi = 2.0 * d_phi;
  constexpr int kZoomPoints = 21;
  for (int level = 0; level < 6; ++level) {
    const double t0 = best_theta;
    const double p0 = best_phi;
    for (int i = 0; i < kZoomPoints; ++i) {
      for (int j = 0; j < kZoomPoints; ++j) {
        consider(t0 + span_theta * (2.0 * i / (kZoomPoints - 1) - 1.0),
                 p0 + span_phi * (2.0 * j / (kZoomPoints - 1) - 1.0));
      }
    }
    span_theta /= 5.0;
    span_phi /= 5.0;
  }

  const double c = std::cos(best_theta / 2);
  const double s = std::sin(best_theta / 2);
  const Complex phase = std::polar(1.0, best_phi);
  ComplexMatrix basis{{c, -std::conj(phase) * s}, {phase * s, c}};

  LeakageEstimate est;
  est.kind = EstimateKind::grid_oracle;
  est.bits = std::max(0.0, std::log2(best));
  est.achieving_povm = projective_elements(basis);
  est.meta.grid_resolution = resolution;
  return est;
}

GentleLeakageInterval gentle_leakage_interval(const CqEnsemble& e, const GentlenessSpec& spec,
                                              const OptimizerConfig& config, GentlenessMode mode) {
  GentleLeakageInterval out;
  out.alpha = spec.alpha;
  out.delta = spec.delta;

  const auto q = maximal_quantum_leakage(e, config);
  out.upper_bits = q.bits;

  if (e.dim() >= 2) {
    out.cloning = lower_bound_solve(e, spec.alpha, q.bits);
    out.cloning_bits = out.cloning.lower_bits;
  }

  // Certified gentle POVMs: the three-outcome construction on the positive
  // part of every pairwise difference, plus the maximal-leakage POVM itself.
  double search = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    for (std::size_t x2 = 0; x2 < e.size(); ++x2) {
      if (x == x2) continue;
      const auto lplus = positive_part(e.state(x).hermitian() - e.state(x2).hermitian());
      if (lplus.matrix().max_abs() < 1e-12) continue;
      const auto eps = epsilon_prime(lplus, spec, e, mode);
      if (eps.epsilon <= 0.0) continue;
      const auto construction = gentle_povm(lplus, eps.epsilon);
      if (!certify_gentle(e, construction.implementation, spec, mode).certified) continue;
      const double bits = povm_leakage(e, construction.implementation.povm());
      if (bits > search) {
        search = bits;
        out.search_povm = construction.implementation.povm();
      }
    }
  }
  if (q.achieving_povm) {
    const auto impl = PovmImplementation::square_root(*q.achieving_povm);
    if (certify_gentle(e, impl, spec, mode).certified) {
      const double bits = povm_leakage(e, *q.achieving_povm);
      if (bits > search) {
        search = bits;
        out.search_povm = q.achieving_povm;
      }
    }
  }
  out.search_bits = search;

  if (out.search_bits > out.cloning_bits) {
    out.lower_bits = out.search_bits;
    out.lower_witness = LowerWitness::gentle_povm_search;
  } else {
    out.lower_bits = out.cloning_bits;
    out.lower_witness = LowerWitness::cloning_bound;
  }
  if (q.kind == EstimateKind::exact_commuting && out.lower_bits < q.bits) {
    out.lower_bits = q.bits;
    out.lower_witness = LowerWitness::commuting_states;
  }
  out.lower_bits = std::clamp(out.lower_bits, 0.0, out.upper_bits);
  return out;
}

}  // namespace qleak
