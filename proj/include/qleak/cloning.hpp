#pragma once

// Asymmetric 1 -> 2 approximate cloning with depolarized marginals
// T_1 = D_{p1}, T_2 = D_{p2}, and the leakage lower bound it yields: the
// first copy goes on to the receiver (disturbance p1 ||I/d - rho||_tr), the
// second copy is measured by the eavesdropper.

#include <string>
#include <vector>

#include "qleak/states.hpp"

namespace qleak {

struct CloningPoint {
  CloningPoint(double p1, double p2, int d);
  double p1;
  double p2;
  int d;
};

// Feasibility test in square-root form:
//   (d/2)(d(2-p1-p2) + sqrt(d^2 (p1-p2)^2 - 4 (1-p1)(1-p2))) - (2-p1-p2) <= d^2 - 1
// Only evaluated where the discriminant is non-negative.
struct SqrtFormResult {
  bool defined = false;
  bool satisfied = false;
  double discriminant = 0.0;
  double lhs_minus_rhs = 0.0;  // NaN when undefined
};
SqrtFormResult region_sqrt_form(const CloningPoint& pt);

// Quadratic form q(p1,p2) = a(p1^2 + p2^2) + 2 b p1 p2 + c (p1 + p2) + 3 with
// a = 2d^2 - 1 - d^4/4, b = 1 - d^4/4, c = -2 - d^2. Feasible iff q <= 1e-12.
// This is the constraint the lower-bound solver uses.
struct QuadraticFormResult {
  bool satisfied = false;
  double slack = 0.0;  // q(p1, p2); <= 0 means feasible
};
QuadraticFormResult region_quadratic_form(const CloningPoint& pt);

struct QuadraticCoefficients {
  double a;
  double b;
  double c;
};
QuadraticCoefficients region_coefficients(int d);

// Smallest p2 in [0, 1] with q(p1, p2) <= 0, or NaN if there is none.
double min_feasible_p2(double p1, int d);

struct CloningBoundResult {
  bool feasible = false;
  double alpha = 0.0;
  double q_bits = 0.0;
  double p1_cap = 0.0;
  double p1_star = 0.0;
  double p2_star = 1.0;
  double lower_bits = 0.0;
  // q(p1*, p2*) and min_x (cap_x - p1*): both >= -1e-9 when feasible.
  double quadratic_slack = 0.0;
  double cap_slack = 0.0;
  // d > 2 makes the problem non-convex; the grid search carries no optimality
  // guarantee there.
  bool convex = true;
};

// Lower bound log2(p2* + (1 - p2*) 2^q_bits) where (p1*, p2*) minimizes p2
// subject to the cloning region and p1 <= alpha / ||I/d - rho^x||_tr for all x.
CloningBoundResult lower_bound_solve(const CqEnsemble& e, double alpha, double q_bits);

struct SweepRow {
  double alpha;
  double p1;
  double p2;
  double lower_bits;
};
std::vector<SweepRow> bound_sweep(const CqEnsemble& e, const std::vector<double>& alphas,
                                  double q_bits);

// CSV with header alpha,p1,p2,lower_bits and 6 decimals per value.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Compares the two region descriptions over an n x n grid of [0,1]^2.
struct RegionDisagreement {
  int d = 2;
  int grid = 0;
  long points = 0;
  long sqrt_defined = 0;
  long sqrt_only = 0;       // sqrt form defined and satisfied, quadratic violated
  long quadratic_only = 0;  // sqrt form defined and violated, quadratic satisfied
  long agree = 0;           // both defined and agreeing
};
RegionDisagreement region_disagreement(int d, int grid);

// True when every pair of ensemble states commutes (Frobenius norm of the
// commutator <= tol). Such ensembles are perfectly clonable, so gentle
// leakage equals maximal leakage.
bool states_commute(const CqEnsemble& e, double tol = 1e-9);

}  // namespace qleak
