#pragma once

#include <string>
#include <vector>

#include "qleak/linalg.hpp"
#include "qleak/states.hpp"

namespace qleak {

// Outcome probabilities below this are treated as impossible outcomes: their
// post-measurement state is undefined and they never count as disturbing.
inline constexpr double kNegligibleProbability = 1e-12;

// Largest epsilon accepted by the three-outcome gentle construction.
inline constexpr double kMaxGentleEpsilon = 0.1;

// P[y | x], rows indexed by outcome y, columns by input x.
class ConditionalProbabilities {
 public:
  ConditionalProbabilities(std::size_t outcomes, std::size_t inputs);
  // Validates shape and that each column sums to 1 within tol.
  explicit ConditionalProbabilities(std::vector<std::vector<double>> rows, double tol = 1e-9);

  std::size_t outcomes() const { return outcomes_; }
  std::size_t inputs() const { return inputs_; }
  double& operator()(std::size_t y, std::size_t x) { return data_[y * inputs_ + x]; }
  double operator()(std::size_t y, std::size_t x) const { return data_[y * inputs_ + x]; }

 private:
  std::size_t outcomes_;
  std::size_t inputs_;
  std::vector<double> data_;
};

class Povm {
 public:
  Povm(std::vector<std::string> labels, std::vector<HermitianMatrix> elements,
       const Tolerances& tol = {});

  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  const HermitianMatrix& element(std::size_t y) const { return elements_[y]; }

  // max entry of |sum_y F_y - I|
  double completeness_residual() const;

 private:
  std::vector<std::string> labels_;
  std::vector<HermitianMatrix> elements_;
};

// Kraus-style operators {B_y} with B_y^dagger B_y = F_y.
class PovmImplementation {
 public:
  // Derives F_y = B_y^dagger B_y.
  PovmImplementation(std::vector<std::string> labels, std::vector<ComplexMatrix> operators,
                     const Tolerances& tol = {});
  // Checks B_y^dagger B_y = F_y within 1e-9.
  PovmImplementation(Povm povm, std::vector<ComplexMatrix> operators);

  // B_y = sqrt(F_y)
  static PovmImplementation square_root(const Povm& povm);

  const Povm& povm() const { return povm_; }
  std::size_t size() const { return operators_.size(); }
  std::size_t dim() const { return povm_.dim(); }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const ComplexMatrix& op(std::size_t y) const { return operators_[y]; }

 private:
  Povm povm_;
  std::vector<ComplexMatrix> operators_;
};

struct GentlenessSpec {
  GentlenessSpec(double alpha, double delta);
  double alpha;
  double delta;
};

enum class GentlenessMode {
  // Outcome probability is the minimum over ensemble states (conservative).
  per_state,
  // Outcomes are drawn from the average state.
  average_state,
};

const char* to_string(GentlenessMode mode);
GentlenessMode parse_gentleness_mode(const std::string& text);

struct OutcomeReport {
  std::string label;
  bool good = true;
  double max_disturbance = 0.0;
  std::vector<double> probability;  // tr(rho^x F_y) per state
  std::vector<double> disturbance;  // per state; NaN when the outcome is impossible for it
};

struct CertificationReport {
  bool certified = false;
  double worst_prob = 0.0;
  double worst_disturbance = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  GentlenessMode mode = GentlenessMode::per_state;
  std::vector<OutcomeReport> outcomes;
};

// P[y | x] = tr(rho^x F_y), clipped to [0, 1] after a -1e-10 sanity check.
ConditionalProbabilities born_probabilities(const CqEnsemble& e, const Povm& f);

// B_y rho B_y^dagger / tr(rho F_y). Throws PreconditionFailed when the outcome
// probability is <= kNegligibleProbability.
DensityOperator post_measurement_state(const DensityOperator& rho, const PovmImplementation& impl,
                                       std::size_t y);

// Checks the (alpha, delta)-gentleness condition for one fixed implementation.
// An outcome is good when every state it can occur for stays within trace
// distance alpha after the measurement.
CertificationReport certify_gentle(const CqEnsemble& e, const PovmImplementation& impl,
                                   const GentlenessSpec& spec,
                                   GentlenessMode mode = GentlenessMode::per_state);

// Three-outcome gentle construction for 0 <= M <= I:
//   B+ = sqrt((1 - 2 eps^2)/2) I + eps M
//   B- = sqrt((1 - 2 eps^2)/2) I - eps M
//   B0 = sqrt(2) eps (I - M^2)^{1/2}
// All B_y are Hermitian, so B_y B_y^dagger = B_y^dagger B_y.
struct GentleConstruction {
  HermitianMatrix m;
  double epsilon;
  PovmImplementation implementation;
};

GentleConstruction gentle_povm(const HermitianMatrix& m, double epsilon,
                               const Tolerances& tol = {});

struct EpsilonPrime {
  double epsilon = 0.0;       // reported value (bisection, optionally capped)
  double bisection = 0.0;     // largest certified epsilon found by bisection
  double analytic_cap = 0.0;  // sqrt(delta / (2 (1 - tr(M^2 rho_avg)))), +inf if unbounded
  int iterations = 0;
};

// Largest epsilon in [0, 1/10] (31 bisection steps) at which the construction
// is certified; with apply_analytic_cap the result is also clipped to the
// outcome-0 probability cap.
EpsilonPrime epsilon_prime(const HermitianMatrix& m, const GentlenessSpec& spec,
                           const CqEnsemble& e, GentlenessMode mode = GentlenessMode::per_state,
                           bool apply_analytic_cap = false);

// First-order prediction of the +/- outcome disturbance of the gentle
// construction: eps sqrt(2/(1-2eps^2)) || M rho + rho M + s tr(rho M) rho ||_tr
// with s = -2 (normalized expansion) or s = +2 (positive_sign). Diagnostic only.
double gentle_first_order_disturbance(const HermitianMatrix& m, const DensityOperator& rho,
                                      double epsilon, bool positive_sign = false);

// Positive part L+ of rho - sigma (sum of lambda_i |i><i| over lambda_i >= 0).
HermitianMatrix positive_part(const HermitianMatrix& delta);

// Rank-one projective measurement onto the columns of a unitary; B_y = F_y.
PovmImplementation projective_povm(const ComplexMatrix& basis, const Tolerances& tol = {});

}  // namespace qleak
