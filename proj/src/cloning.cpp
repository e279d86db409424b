#include "qleak/cloning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qleak/errors.hpp"

namespace qleak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCoarseGrid = 256;

double quadratic_value(double p1, double p2, int d) {
  const auto [a, b, c] = region_coefficients(d);
  return a * (p1 * p1 + p2 * p2) + 2.0 * b * p1 * p2 + c * (p1 + p2) + 3.0;
}

}  // namespace

CloningPoint::CloningPoint(double p1_, double p2_, int d_) : p1(p1_), p2(p2_), d(d_) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw InvalidInput("cloning parameters must lie in [0, 1]");
  }
  if (d < 2) throw InvalidInput("cloning dimension must be >= 2");
}

SqrtFormResult region_sqrt_form(const CloningPoint& pt) {
  const double d = pt.d;
  const double s = 2.0 - pt.p1 - pt.p2;
  SqrtFormResult r;
  r.discriminant = d * d * (pt.p1 - pt.p2) * (pt.p1 - pt.p2) - 4.0 * (1.0 - pt.p1) * (1.0 - pt.p2);
  r.defined = r.discriminant >= -1e-12;
  if (!r.defined) {
    r.lhs_minus_rhs = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double lhs = 0.5 * d * (d * s + std::sqrt(std::max(0.0, r.discriminant))) - s;
  r.lhs_minus_rhs = lhs - (d * d - 1.0);
  r.satisfied = r.lhs_minus_rhs <= 1e-12;
  return r;
}

QuadraticCoefficients region_coefficients(int d) {
  const double d2 = static_cast<double>(d) * d;
  const double d4 = d2 * d2;
  return {2.0 * d2 - 1.0 - d4 / 4.0, 1.0 - d4 / 4.0, -2.0 - d2};
}

QuadraticFormResult region_quadratic_form(const CloningPoint& pt) {
  QuadraticFormResult r;
  r.slack = quadratic_value(pt.p1, pt.p2, pt.d);
  r.satisfied = r.slack <= 1e-12;
  return r;
}

double min_feasible_p2(double p1, int d) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  const auto [a, b, c] = region_coefficients(d);
  // g(p2) = A p2^2 + B p2 + C
  const double qa = a;
  const double qb = 2.0 * b * p1 + c;
  const double qc = a * p1 * p1 + c * p1 + 3.0;
  if (qc <= 1e-12) return 0.0;

  auto in_unit = [](double r) { return r >= -1e-12 && r <= 1.0 + 1e-12; };
  auto clip = [](double r) { return std::clamp(r, 0.0, 1.0); };

  if (std::abs(qa) < 1e-14) {
    if (qb >= 0.0) return kNaN;  // g(0) > 0 and non-decreasing
    const double r = -qc / qb;
    return in_unit(r) ? clip(r) : kNaN;
  }
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    if (disc < -1e-12 * (qb * qb + std::abs(4.0 * qa * qc))) return kNaN;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double t = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
  double r1 = t / qa;
  double r2 = t != 0.0 ? qc / t : r1;
  if (r1 > r2) std::swap(r1, r2);
  // g(0) > 0: for A > 0 the feasible set is [r1, r2] (so 0 < r1);
  // for A < 0 it is the complement of (r1, r2) with 0 inside, so r2 comes first.
  const double first = qa > 0.0 ? r1 : r2;
  return in_unit(first) ? clip(first) : kNaN;
}

CloningBoundResult lower_bound_solve(const CqEnsemble& e, double alpha, double q_bits) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  if (!(q_bits >= 0.0) || !std::isfinite(q_bits)) {
    throw InvalidInput("maximal leakage must be a finite non-negative number of bits");
  }
  const int d = static_cast<int>(e.dim());
  if (d < 2) throw InvalidInput("cloning bound requires dimension >= 2");

  CloningBoundResult r;
  r.alpha = alpha;
  r.q_bits = q_bits;
  r.convex = d == 2;

  const auto mixed = DensityOperator::maximally_mixed(e.dim());
  double cap = kInf;
  for (const auto& rho : e.states()) {
    const double denom = trace_distance(mixed.hermitian(), rho.hermitian());
    if (denom > 1e-12) cap = std::min(cap, alpha / denom);
  }
  r.p1_cap = std::clamp(cap, 0.0, 1.0);

  auto objective = [d](double p1) {
    const double p2 = min_feasible_p2(p1, d);
    return std::isnan(p2) ? kInf : p2;
  };

  // Coarse scan; ties keep the smaller p1.
  double best_p1 = 0.0;
  double best_p2 = kInf;
  int best_index = 0;
  for (int i = 0; i < kCoarseGrid; ++i) {
    const double p1 = r.p1_cap * static_cast<double>(i) / (kCoarseGrid - 1);
    const double p2 = objective(p1);
    if (p2 < best_p2) {
      best_p2 = p2;
      best_p1 = p1;
      best_index = i;
    }
  }

  // Golden-section refinement over the neighbouring cells.
  if (std::isfinite(best_p2) && r.p1_cap > 0.0) {
    const double step = r.p1_cap / (kCoarseGrid - 1);
    double lo = std::max(0.0, (best_index - 1) * step);
    double hi = std::min(r.p1_cap, (best_index + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = objective(x2);
      }
    }
    for (double p1 : {x1, x2, lo, hi}) {
      const double p2 = objective(p1);
      if (p2 < best_p2 || (p2 == best_p2 && p1 < best_p1)) {
        best_p2 = p2;
        best_p1 = p1;
      }
    }
    // Report the cap itself when it is as good as the refined point.
    const double at_cap = objective(r.p1_cap);
    if (at_cap <= best_p2) {
      best_p2 = at_cap;
      best_p1 = r.p1_cap;
    }
  }

  if (!std::isfinite(best_p2)) {
    r.feasible = false;
    r.p1_star = 0.0;
    r.p2_star = 1.0;
    r.lower_bits = 0.0;
    return r;
  }

  r.feasible = true;
  r.p1_star = best_p1;
  r.p2_star = best_p2;
  r.quadratic_slack = quadratic_value(best_p1, best_p2, d);
  r.cap_slack = r.p1_cap - best_p1;
  if (best_p2 == 0.0) {
    r.lower_bits = q_bits;
  } else {
    const double value = std::log2(best_p2 + (1.0 - best_p2) * std::exp2(q_bits));
    r.lower_bits = std::clamp(value, 0.0, q_bits);
  }
  return r;
}

std::vector<SweepRow> bound_sweep(const CqEnsemble& e, const std::vector<double>& alphas,
                                  double q_bits) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    const auto r = lower_bound_solve(e, alpha, q_bits);
    rows.push_back({alpha, r.p1_star, r.p2_star, r.lower_bits});
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,p1,p2,lower_bits\n";
  char line[128];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f\n", row.alpha, row.p1, row.p2,
                  row.lower_bits);
    out += line;
  }
  return out;
}

RegionDisagreement region_disagreement(int d, int grid) {
  if (grid < 2) throw InvalidInput("region grid must have at least 2 points per axis");
  RegionDisagreement r;
  r.d = d;
  r.grid = grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const CloningPoint pt(static_cast<double>(i) / (grid - 1), static_cast<double>(j) / (grid - 1),
                            d);
      const auto sq = region_sqrt_form(pt);
      const auto qf = region_quadratic_form(pt);
      ++r.points;
      if (!sq.defined) continue;
      ++r.sqrt_defined;
      if (sq.satisfied && !qf.satisfied) {
        ++r.sqrt_only;
      } else if (!sq.satisfied && qf.satisfied) {
        ++r.quadratic_only;
      } else {
        ++r.agree;
      }
    }
  }
  return r;
}

bool states_commute(const CqEnsemble& e, double tol) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      if (commutator(e.state(i).matrix(), e.state(j).matrix()).frobenius_norm() > tol) return false;
    }
  }
  return true;
}

}  // namespace qleak
