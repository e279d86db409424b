#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qleak {

struct NelderMeadOptions {
  int max_evals = 2000;
  // Converged when max - min objective over the simplex falls to this value.
  double ftol = 1e-9;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

// Derivative-free downhill simplex minimization.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& options);

}  // namespace qleak
