#pragma once

// Random operators for property tests and sampling.

#include <cstdint>
#include <random>

#include "qleak/linalg.hpp"

namespace qleak {

using Rng = std::mt19937_64;

// Independent stream for (seed, index); used for multi-start and batched work.
Rng derive_rng(std::uint64_t seed, std::uint64_t index);

ComplexVector random_gaussian_vector(std::size_t dim, Rng& rng);

// Haar unitary: Gram-Schmidt on a matrix of standard complex Gaussians.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

// Hermitian with i.i.d. Gaussian entries (GUE-like).
HermitianMatrix random_hermitian(std::size_t dim, Rng& rng);

// Density operator G G^dagger / tr(G G^dagger) with G a dim x rank Gaussian.
HermitianMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);

// Random pure state |psi><psi|.
HermitianMatrix random_pure_state(std::size_t dim, Rng& rng);

}  // namespace qleak
