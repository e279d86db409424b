#pragma once

// Reference computations for the tests. Nothing here calls into the library:
// qubit quantities are done with closed forms on plain arrays.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat2 = std::array<std::array<C, 2>, 2>;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat2 adj(const Mat2& a) {
  return {{{std::conj(a[0][0]), std::conj(a[1][0])}, {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

inline Mat2 add(const Mat2& a, const Mat2& b, double sb = 1.0) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + sb * b[i][j];
  return r;
}

inline Mat2 scale(const Mat2& a, double s) { return add(Mat2{}, a, s); }

inline Mat2 projector(C a, C b) {
  const double n = std::norm(a) + std::norm(b);
  return {{{a * std::conj(a) / n, a * std::conj(b) / n}, {b * std::conj(a) / n, b * std::conj(b) / n}}};
}

inline Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

inline double trace(const Mat2& a) { return (a[0][0] + a[1][1]).real(); }

// Eigenvalues of a Hermitian 2x2 [[a, z], [z*, b]], descending.
inline std::array<double, 2> eig2(const Mat2& m) {
  const double a = m[0][0].real();
  const double b = m[1][1].real();
  const double r = std::sqrt(0.25 * (a - b) * (a - b) + std::norm(m[0][1]));
  return {0.5 * (a + b) + r, 0.5 * (a + b) - r};
}

inline double trace_distance(const Mat2& rho, const Mat2& sigma) {
  const auto l = eig2(add(rho, sigma, -1.0));
  return 0.5 * (std::abs(l[0]) + std::abs(l[1]));
}

// f(M) for Hermitian 2x2 M through its spectral projectors.
template <typename F>
Mat2 spectral_map(const Mat2& m, F f) {
  const auto l = eig2(m);
  if (std::abs(l[0] - l[1]) < 1e-15) return scale(identity(), f(l[0]));
  // P0 = (M - l1 I)/(l0 - l1), P1 = I - P0
  const Mat2 p0 = scale(add(m, identity(), -l[1]), 1.0 / (l[0] - l[1]));
  const Mat2 p1 = add(identity(), p0, -1.0);
  return add(scale(p0, f(l[0])), scale(p1, f(l[1])));
}

inline std::array<Mat2, 4> bb84_states() {
  const double h = 1.0 / std::sqrt(2.0);
  return {projector(1, 0), projector(0, 1), projector(h, h), projector(h, -h)};
}

// Exact QBER, Sibson leakage and mean disturbance of an instrument {B_y}
// applied to BB84 traffic, by enumeration.
struct Bb84Stats {
  double qber = 0.0;
  double leakage_bits = 0.0;
  double mean_disturbance = 0.0;
};

inline Bb84Stats enumerate_bb84(const std::vector<Mat2>& ops) {
  const auto states = bb84_states();
  const double h = 1.0 / std::sqrt(2.0);
  // Wrong-bit projector per x: x = (basis, bit).
  const std::array<Mat2, 4> wrong = {projector(0, 1), projector(1, 0), projector(h, -h),
                                     projector(h, h)};
  Bb84Stats s;
  double sibson = 0.0;
  for (const auto& b : ops) {
    double best = 0.0;
    for (int x = 0; x < 4; ++x) {
      const Mat2 unnorm = mul(mul(b, states[x]), adj(b));
      const double p = trace(unnorm);
      best = std::max(best, p);
      if (p < 1e-14) continue;
      const Mat2 post = scale(unnorm, 1.0 / p);
      s.qber += 0.25 * p * trace(mul(post, wrong[x]));
      s.mean_disturbance += 0.25 * p * trace_distance(post, states[x]);
    }
    sibson += best;
  }
  s.leakage_bits = std::log2(sibson);
  return s;
}

// The three-outcome gentle instrument for a 2x2 operator M.
inline std::vector<Mat2> gentle_ops(const Mat2& m, double eps) {
  const double c = std::sqrt((1.0 - 2.0 * eps * eps) / 2.0);
  const Mat2 root = spectral_map(add(identity(), mul(m, m), -1.0),
                          [](double v) { return std::sqrt(std::max(0.0, v)); });
  return {add(scale(identity(), c), m, eps), add(scale(identity(), c), m, -eps),
          scale(root, std::sqrt(2.0) * eps)};
}

// Positive part of |0><0| - |+><+|.
inline Mat2 default_gentle_m() {
  const double h = 1.0 / std::sqrt(2.0);
  return spectral_map(add(projector(1, 0), projector(h, h), -1.0),
               [](double v) { return v > 0.0 ? v : 0.0; });
}

// Minimal p2 on a fine scan of [0, 1] with q(p1, p2) <= 0 for the cloning
// quadratic with explicit d = 2 coefficients a = 3, b = -3, c = -6.
inline double scan_min_p2_d2(double p1, int n = 2000001) {
  for (int i = 0; i < n; ++i) {
    const double p2 = static_cast<double>(i) / (n - 1);
    const double q = 3.0 * (p1 * p1 + p2 * p2) - 6.0 * p1 * p2 - 6.0 * (p1 + p2) + 3.0;
    if (q <= 0.0) return p2;
  }
  return NAN;
}

}  // namespace oracle
