#include "dynphase/instances.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "dynphase/error.hpp"

namespace dynphase {

namespace {

constexpr int kMaxAttempts = 10'000;

bool separated(const ComplexVector& values, std::size_t upto, Complex candidate, double gap) {
  for (std::size_t i = 0; i < upto; ++i) {
    if (std::abs(values[i] - candidate) < gap) return false;
  }
  return true;
}

}  // namespace

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ComplexVector random_vector(Rng& rng, std::size_t dimension) {
  ComplexVector out(dimension);
  for (auto& z : out) z = random_complex(rng);
  return out;
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix out(rows, cols);
  for (auto& z : out.data()) z = random_complex(rng);
  return out;
}

ComplexVector random_separated_eigenvalues(Rng& rng, std::size_t count, double min_gap,
                                           double min_modulus, double max_modulus) {
  std::uniform_real_distribution<double> modulus(min_modulus, max_modulus);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ComplexVector out(count);
  for (std::size_t i = 0; i < count; ++i) {
    int attempts = 0;
    while (true) {
      const double r = modulus(rng);
      const Complex candidate = std::polar(r, angle(rng));
      if (separated(out, i, candidate, min_gap)) {
        out[i] = candidate;
        break;
      }
      if (++attempts == kMaxAttempts) {
        fail(Errc::kInvalidArgument, "random eigenvalues: gap too large for the annulus");
      }
    }
  }
  return out;
}

ComplexVector random_real_eigenvalues(Rng& rng, std::size_t count, double low, double high,
                                      double min_gap) {
  std::uniform_real_distribution<double> uniform(low, high);
  ComplexVector out(count);
  for (std::size_t i = 0; i < count; ++i) {
    int attempts = 0;
    while (true) {
      const Complex candidate{uniform(rng), 0.0};
      if (separated(out, i, candidate, min_gap)) {
        out[i] = candidate;
        break;
      }
      if (++attempts == kMaxAttempts) {
        fail(Errc::kInvalidArgument, "random real eigenvalues: gap too large for the interval");
      }
    }
  }
  return out;
}

JordanSpec random_jordan_spec(Rng& rng, const std::vector<std::size_t>& multiplicities,
                              double min_gap) {
  const std::size_t d = std::accumulate(multiplicities.begin(), multiplicities.end(),
                                        std::size_t{0});
  JordanSpec spec;
  spec.eigenvalues = random_separated_eigenvalues(rng, multiplicities.size(), min_gap);
  spec.multiplicities = multiplicities;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    spec.basis = random_matrix(rng, d, d);
    if (condition_number(spec.basis) < 1e3) return spec;
  }
  fail(Errc::kNonConvergence, "random_jordan_spec: no well-conditioned basis found");
}

}  // namespace dynphase
