#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dynphase/linalg.hpp"
#include "dynphase/spectral.hpp"

namespace dynphase {

using Rng = std::mt19937_64;

/// Standard complex Gaussian: independent N(0, 1/2) real and imaginary parts.
Complex random_complex(Rng& rng);
ComplexVector random_vector(Rng& rng, std::size_t dimension);
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// `count` eigenvalues with modulus in [min_modulus, max_modulus], uniform
/// argument, and pairwise distance at least `min_gap` (rejection sampled).
ComplexVector random_separated_eigenvalues(Rng& rng, std::size_t count, double min_gap,
                                           double min_modulus = 0.8,
                                           double max_modulus = 1.2);

/// Distinct real eigenvalues in [low, high] with pairwise gap at least min_gap.
ComplexVector random_real_eigenvalues(Rng& rng, std::size_t count, double low, double high,
                                      double min_gap);

/// Random basis, separated eigenvalues, given block sizes. Rejects bases
/// with condition number above 1e3.
JordanSpec random_jordan_spec(Rng& rng, const std::vector<std::size_t>& multiplicities,
                              double min_gap = 0.2);

}  // namespace dynphase
