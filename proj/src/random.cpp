#include "qleak/random.hpp"

#include <cmath>

namespace qleak {

Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

ComplexVector random_gaussian_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return v;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  std::vector<ComplexVector> cols;
  cols.reserve(dim);
  while (cols.size() < dim) {
    ComplexVector v = random_gaussian_vector(dim, rng);
    // Two passes of modified Gram-Schmidt for orthogonality at roundoff level.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : cols) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < dim; ++i) overlap += std::conj(u[i]) * v[i];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= overlap * u[i];
      }
    }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& z : v) z /= norm;
    cols.push_back(std::move(v));
  }
  ComplexMatrix u(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = cols[j][i];
  }
  return u;
}

HermitianMatrix random_hermitian(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = normal(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return HermitianMatrix(m);
}

HermitianMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  ComplexMatrix acc(dim);
  for (std::size_t r = 0; r < rank; ++r) acc += ComplexMatrix::outer(random_gaussian_vector(dim, rng));
  acc *= 1.0 / acc.trace().real();
  return HermitianMatrix(acc, 1e-8);
}

HermitianMatrix random_pure_state(std::size_t dim, Rng& rng) { return random_density(dim, 1, rng); }

}  // namespace qleak
