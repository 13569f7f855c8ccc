#include "dynphase/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dynphase/error.hpp"
#include "dynphase/numeric.hpp"

namespace dynphase {

std::size_t JordanSpec::block_offset(std::size_t j) const {
  if (j > multiplicities.size()) {
    fail(Errc::kInvalidArgument, "block index out of range");
  }
  return std::accumulate(multiplicities.begin(),
                         multiplicities.begin() + static_cast<std::ptrdiff_t>(j),
                         std::size_t{0});
}

JordanSpec JordanSpec::diagonal(const ComplexVector& eigenvalues) {
  return JordanSpec{eigenvalues, std::vector<std::size_t>(eigenvalues.size(), 1),
                    ComplexMatrix::identity(eigenvalues.size())};
}

void validate(const JordanSpec& spec) {
  if (spec.eigenvalues.size() != spec.multiplicities.size()) {
    fail(Errc::kInvalidArgument,
         "Jordan spec: " + std::to_string(spec.eigenvalues.size()) +
             " eigenvalues but " + std::to_string(spec.multiplicities.size()) +
             " multiplicities");
  }
  if (spec.multiplicities.empty()) {
    fail(Errc::kInvalidArgument, "Jordan spec: no blocks");
  }
  if (std::any_of(spec.multiplicities.begin(), spec.multiplicities.end(),
                  [](std::size_t m) { return m == 0; })) {
    fail(Errc::kInvalidArgument, "Jordan spec: multiplicities must be positive");
  }
  const std::size_t total = std::accumulate(
      spec.multiplicities.begin(), spec.multiplicities.end(), std::size_t{0});
  if (!spec.basis.square() || spec.basis.rows() != total) {
    fail(Errc::kInvalidArgument,
         "Jordan spec: basis must be " + std::to_string(total) + "x" +
             std::to_string(total));
  }
  require_finite(spec.eigenvalues, "Jordan eigenvalues");
  require_finite(spec.basis, "Jordan basis");
  if (!(condition_number(spec.basis) <= defaults::kBasisCondition)) {
    fail(Errc::kSingular, "Jordan spec: basis is singular or ill-conditioned");
  }
}

ComplexMatrix jordan_matrix(const JordanSpec& spec) {
  return jordan_power(spec, 1);
}

ComplexMatrix assemble(const JordanSpec& spec) {
  validate(spec);
  const ComplexMatrix s_inv =
      LuDecomposition(spec.basis, 0.0).solve(ComplexMatrix::identity(spec.dimension()));
  return matmul(matmul(spec.basis, jordan_matrix(spec)), s_inv);
}

ComplexMatrix jordan_power(const JordanSpec& spec, std::size_t power) {
  validate(spec);
  const std::size_t d = spec.dimension();
  ComplexMatrix out(d, d);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < spec.block_count(); ++j) {
    const std::size_t m = spec.multiplicities[j];
    const Complex lambda = spec.eigenvalues[j];
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t n = k; n < m; ++n) {
        const std::size_t shift = n - k;
        if (shift > power) break;
        const auto coeff = static_cast<double>(binomial(power, shift));
        out(offset + k, offset + n) = coeff * ipow(lambda, power - shift);
      }
    }
    offset += m;
  }
  return out;
}

ComplexVector GeneratorCoordinates::concatenated() const {
  std::vector<Complex> all;
  for (const ComplexVector& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return ComplexVector(std::move(all));
}

GeneratorCoordinates generator_coordinates(const JordanSpec& spec,
                                           const ComplexVector& phi) {
  validate(spec);
  if (phi.size() != spec.dimension()) {
    fail(Errc::kDimensionMismatch,
         "generator_coordinates: phi has length " + std::to_string(phi.size()) +
             ", spec dimension " + std::to_string(spec.dimension()));
  }
  require_finite(phi, "phi");
  const ComplexVector psi = LuDecomposition(spec.basis, 0.0).solve(phi);
  GeneratorCoordinates out;
  std::size_t offset = 0;
  for (std::size_t m : spec.multiplicities) {
    out.blocks.emplace_back(std::vector<Complex>(
        psi.begin() + static_cast<std::ptrdiff_t>(offset),
        psi.begin() + static_cast<std::ptrdiff_t>(offset + m)));
    offset += m;
  }
  return out;
}

bool depends_on_all_generators(const JordanSpec& spec, const ComplexVector& phi,
                               std::optional<double> tol) {
  const GeneratorCoordinates coords = generator_coordinates(spec, phi);
  const double threshold =
      tol.value_or(defaults::kAbsoluteTol * max_abs(coords.concatenated()));
  return std::all_of(coords.blocks.begin(), coords.blocks.end(),
                     [&](const ComplexVector& block) {
                       return std::abs(block[block.size() - 1]) > threshold;
                     });
}

ComplexMatrix hankel_of(const ComplexVector& block) {
  if (block.empty()) fail(Errc::kInvalidArgument, "hankel_of: empty block");
  const std::size_t m = block.size();
  ComplexMatrix out(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t n = 0; k + n < m; ++n) out(k, n) = block[k + n];
  }
  return out;
}

bool pairwise_distinct(const ComplexVector& values, double rel_tol) {
  const double threshold = rel_tol * max_abs(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (!(std::abs(values[i] - values[j]) > threshold)) return false;
    }
  }
  return true;
}

}  // namespace dynphase
