#include "qleak/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qleak/errors.hpp"

namespace qleak {

ConditionalProbabilities::ConditionalProbabilities(std::size_t outcomes, std::size_t inputs)
    : outcomes_(outcomes), inputs_(inputs), data_(outcomes * inputs, 0.0) {
  if (outcomes == 0 || inputs == 0) {
    throw InvalidInput("conditional probability matrix must be non-empty");
  }
}

ConditionalProbabilities::ConditionalProbabilities(std::vector<std::vector<double>> rows,
                                                   double tol)
    : ConditionalProbabilities(rows.size(), rows.empty() ? 0 : rows.front().size()) {
  for (std::size_t y = 0; y < outcomes_; ++y) {
    if (rows[y].size() != inputs_) throw InvalidInput("conditional probability rows are ragged");
    for (std::size_t x = 0; x < inputs_; ++x) {
      const double v = rows[y][x];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw InvalidInput("conditional probability entries must lie in [0, 1]");
      }
      (*this)(y, x) = v;
    }
  }
  for (std::size_t x = 0; x < inputs_; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < outcomes_; ++y) s += (*this)(y, x);
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream os;
      os << "conditional probability column " << x << " sums to " << s << ", expected 1";
      throw InvalidInput(os.str());
    }
  }
}

// Povm

Povm::Povm(std::vector<std::string> labels, std::vector<HermitianMatrix> elements,
           const Tolerances& tol)
    : labels_(std::move(labels)), elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidInput("POVM must have at least one element");
  if (labels_.size() != elements_.size()) {
    throw InvalidInput("POVM labels and elements must have equal length");
  }
  for (std::size_t y = 0; y < elements_.size(); ++y) {
    if (elements_[y].dim() != elements_.front().dim()) {
      throw InvalidInput("POVM element " + std::to_string(y) + " has mismatched dimension");
    }
    const double lmin = min_eigenvalue(elements_[y], tol);
    if (lmin < -tol.psd) {
      std::ostringstream os;
      os << "POVM element " << y << " is not PSD (min eigenvalue " << lmin << ")";
      throw InvalidInput(os.str());
    }
  }
  const double residual = completeness_residual();
  if (residual > 1e-9) {
    std::ostringstream os;
    os << "POVM elements do not sum to identity (residual " << residual << ")";
    throw InvalidInput(os.str());
  }
}

double Povm::completeness_residual() const {
  ComplexMatrix sum(dim());
  for (const auto& f : elements_) sum += f.matrix();
  return max_abs_diff(sum, ComplexMatrix::identity(dim()));
}

// PovmImplementation

namespace {

std::vector<HermitianMatrix> gram_elements(const std::vector<ComplexMatrix>& operators) {
  std::vector<HermitianMatrix> out;
  out.reserve(operators.size());
  for (const auto& b : operators) out.emplace_back(b.adjoint() * b, 1e-8);
  return out;
}

}  // namespace

PovmImplementation::PovmImplementation(std::vector<std::string> labels,
                                       std::vector<ComplexMatrix> operators,
                                       const Tolerances& tol)
    : povm_(std::move(labels), gram_elements(operators), tol), operators_(std::move(operators)) {}

PovmImplementation::PovmImplementation(Povm povm, std::vector<ComplexMatrix> operators)
    : povm_(std::move(povm)), operators_(std::move(operators)) {
  if (operators_.size() != povm_.size()) {
    throw InvalidInput("implementation has " + std::to_string(operators_.size()) +
                       " operators for a POVM with " + std::to_string(povm_.size()) + " elements");
  }
  for (std::size_t y = 0; y < operators_.size(); ++y) {
    if (operators_[y].dim() != povm_.dim()) {
      throw InvalidInput("implementation operator " + std::to_string(y) +
                         " has mismatched dimension");
    }
    const double err = max_abs_diff(operators_[y].adjoint() * operators_[y],
                                    povm_.element(y).matrix());
    if (err > 1e-9) {
      std::ostringstream os;
      os << "implementation operator " << y << " does not reproduce its POVM element (residual "
         << err << ")";
      throw InvalidInput(os.str());
    }
  }
}

PovmImplementation PovmImplementation::square_root(const Povm& povm) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(povm.size());
  for (const auto& f : povm.elements()) ops.push_back(psd_sqrt(f).matrix());
  return PovmImplementation(povm, std::move(ops));
}

// Gentleness

GentlenessSpec::GentlenessSpec(double alpha_, double delta_) : alpha(alpha_), delta(delta_) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in [0, 1]");
}

const char* to_string(GentlenessMode mode) {
  return mode == GentlenessMode::per_state ? "per-state" : "average-state";
}

GentlenessMode parse_gentleness_mode(const std::string& text) {
  if (text == "per-state") return GentlenessMode::per_state;
  if (text == "average-state") return GentlenessMode::average_state;
  throw InvalidInput("unknown gentleness mode '" + text + "' (expected per-state or average-state)");
}

ConditionalProbabilities born_probabilities(const CqEnsemble& e, const Povm& f) {
  if (e.dim() != f.dim()) {
    throw InvalidInput("born_probabilities: ensemble dimension " + std::to_string(e.dim()) +
                       " does not match POVM dimension " + std::to_string(f.dim()));
  }
  ConditionalProbabilities p(f.size(), e.size());
  for (std::size_t y = 0; y < f.size(); ++y) {
    for (std::size_t x = 0; x < e.size(); ++x) {
      const double v = trace_product(e.state(x).hermitian(), f.element(y));
      if (v < -1e-10 || v > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "Born probability out of range: P[" << y << "|" << x << "] = " << v;
        throw InvalidInput(os.str());
      }
      p(y, x) = std::clamp(v, 0.0, 1.0);
    }
  }
  return p;
}

DensityOperator post_measurement_state(const DensityOperator& rho, const PovmImplementation& impl,
                                       std::size_t y) {
  if (rho.dim() != impl.dim()) throw InvalidInput("post_measurement_state: dimension mismatch");
  if (y >= impl.size()) throw InvalidInput("post_measurement_state: outcome index out of range");
  const double prob = trace_product(rho.hermitian(), impl.povm().element(y));
  if (prob <= kNegligibleProbability) {
    std::ostringstream os;
    os << "outcome '" << impl.povm().labels()[y] << "' has negligible probability " << prob;
    throw PreconditionFailed(os.str());
  }
  ComplexMatrix post = conjugate(impl.op(y), rho.matrix());
  post *= 1.0 / prob;
  Tolerances tol;
  tol.hermitian = 1e-8;
  return DensityOperator(HermitianMatrix(post, 1e-8), tol);
}

CertificationReport certify_gentle(const CqEnsemble& e, const PovmImplementation& impl,
                                   const GentlenessSpec& spec, GentlenessMode mode) {
  if (e.dim() != impl.dim()) throw InvalidInput("certify_gentle: dimension mismatch");
  CertificationReport report;
  report.alpha = spec.alpha;
  report.delta = spec.delta;
  report.mode = mode;

  for (std::size_t y = 0; y < impl.size(); ++y) {
    OutcomeReport out;
    out.label = impl.povm().labels()[y];
    for (std::size_t x = 0; x < e.size(); ++x) {
      const double prob = std::max(0.0, trace_product(e.state(x).hermitian(),
                                                      impl.povm().element(y)));
      out.probability.push_back(prob);
      if (prob <= kNegligibleProbability) {
        out.disturbance.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      const auto post = post_measurement_state(e.state(x), impl, y);
      const double dist = trace_distance(post.hermitian(), e.state(x).hermitian());
      out.disturbance.push_back(dist);
      out.max_disturbance = std::max(out.max_disturbance, dist);
      if (dist > spec.alpha + 1e-12) out.good = false;
    }
    report.worst_disturbance = std::max(report.worst_disturbance, out.max_disturbance);
    report.outcomes.push_back(std::move(out));
  }

  if (mode == GentlenessMode::per_state) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < e.size(); ++x) {
      double good = 0.0;
      for (const auto& out : report.outcomes) {
        if (out.good) good += out.probability[x];
      }
      worst = std::min(worst, good);
    }
    report.worst_prob = worst;
  } else {
    const auto avg = average_state(e);
    double good = 0.0;
    for (std::size_t y = 0; y < impl.size(); ++y) {
      if (report.outcomes[y].good) {
        good += std::max(0.0, trace_product(avg.hermitian(), impl.povm().element(y)));
      }
    }
    report.worst_prob = good;
  }
  report.worst_prob = std::min(1.0, report.worst_prob);
  report.certified = report.worst_prob >= 1.0 - spec.delta - 1e-12;
  return report;
}

// Gentle construction

namespace {

void require_unit_interval_operator(const HermitianMatrix& m, const Tolerances& tol) {
  const auto values = eigenvalues(m, tol);
  if (values.back() < -tol.psd || values.front() > 1.0 + tol.psd) {
    std::ostringstream os;
    os << "operator M must satisfy 0 <= M <= I (eigenvalues in [" << values.back() << ", "
       << values.front() << "])";
    throw InvalidInput(os.str());
  }
}

}  // namespace

GentleConstruction gentle_povm(const HermitianMatrix& m, double epsilon, const Tolerances& tol) {
  if (!(epsilon >= 0.0 && epsilon <= kMaxGentleEpsilon)) {
    throw InvalidInput("gentle construction requires 0 <= epsilon <= 1/10");
  }
  require_unit_interval_operator(m, tol);

  const std::size_t d = m.dim();
  const auto id = HermitianMatrix::identity(d);
  const double c = std::sqrt((1.0 - 2.0 * epsilon * epsilon) / 2.0);
  const auto m_squared = HermitianMatrix(m.matrix() * m.matrix(), 1e-8);
  const auto residual = apply_function(id - m_squared, [](double v) {
    return std::sqrt(std::max(0.0, v));
  }, tol);

  const HermitianMatrix b_plus = id * c + m * epsilon;
  const HermitianMatrix b_minus = id * c - m * epsilon;
  const HermitianMatrix b_zero = residual * (std::sqrt(2.0) * epsilon);

  std::vector<HermitianMatrix> elements{
      HermitianMatrix(b_plus.matrix() * b_plus.matrix(), 1e-8),
      HermitianMatrix(b_minus.matrix() * b_minus.matrix(), 1e-8),
      HermitianMatrix(b_zero.matrix() * b_zero.matrix(), 1e-8)};
  Povm povm({"+", "-", "0"}, std::move(elements), tol);
  PovmImplementation impl(std::move(povm),
                          {b_plus.matrix(), b_minus.matrix(), b_zero.matrix()});
  return GentleConstruction{m, epsilon, std::move(impl)};
}

EpsilonPrime epsilon_prime(const HermitianMatrix& m, const GentlenessSpec& spec,
                           const CqEnsemble& e, GentlenessMode mode, bool apply_analytic_cap) {
  if (m.dim() != e.dim()) throw InvalidInput("epsilon_prime: dimension mismatch");
  auto certified = [&](double eps) {
    return certify_gentle(e, gentle_povm(m, eps).implementation, spec, mode).certified;
  };

  EpsilonPrime out;
  const double m2_avg = trace_product(HermitianMatrix(m.matrix() * m.matrix(), 1e-8),
                                      average_state(e).hermitian());
  const double slack = 1.0 - m2_avg;
  out.analytic_cap = slack > 1e-15 ? std::sqrt(spec.delta / (2.0 * slack))
                                   : std::numeric_limits<double>::infinity();

  if (certified(kMaxGentleEpsilon)) {
    out.bisection = kMaxGentleEpsilon;
  } else {
    double lo = 0.0;
    double hi = kMaxGentleEpsilon;
    for (int i = 0; i < 31; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (certified(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++out.iterations;
    }
    out.bisection = lo;
  }
  out.epsilon = apply_analytic_cap ? std::min(out.bisection, out.analytic_cap) : out.bisection;
  return out;
}

double gentle_first_order_disturbance(const HermitianMatrix& m, const DensityOperator& rho,
                                      double epsilon, bool positive_sign) {
  const double tr_rho_m = trace_product(rho.hermitian(), m);
  const double sign = positive_sign ? 2.0 : -2.0;
  const ComplexMatrix anti = m.matrix() * rho.matrix() + rho.matrix() * m.matrix();
  const HermitianMatrix term(anti + Complex(sign * tr_rho_m) * rho.matrix(), 1e-8);
  const double scale = epsilon * std::sqrt(2.0 / (1.0 - 2.0 * epsilon * epsilon));
  return scale * 0.5 * trace_norm(term);
}

HermitianMatrix positive_part(const HermitianMatrix& delta) {
  return apply_function(delta, [](double v) { return v > 0.0 ? v : 0.0; });
}

PovmImplementation projective_povm(const ComplexMatrix& basis, const Tolerances& tol) {
  if (!is_unitary(basis, tol.unitary)) throw InvalidInput("projective_povm: basis is not unitary");
  std::vector<std::string> labels;
  std::vector<HermitianMatrix> elements;
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    labels.push_back(std::to_string(k));
    elements.push_back(HermitianMatrix::projector(basis.column(k)));
    ops.push_back(elements.back().matrix());
  }
  return PovmImplementation(Povm(std::move(labels), std::move(elements), tol), std::move(ops));
}

}  // namespace qleak
