#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dynphase/linalg.hpp"

namespace dynphase {

/// Exact Jordan structure A = S J S^{-1}. Block j has eigenvalue
/// `eigenvalues[j]`, size `multiplicities[j]`, and occupies consecutive
/// columns of `basis` in the order given. Within a block the last column is
/// the chain generator (leading generalized eigenvector).
struct JordanSpec {
  ComplexVector eigenvalues;
  std::vector<std::size_t> multiplicities;
  ComplexMatrix basis;

  std::size_t dimension() const noexcept { return basis.rows(); }
  std::size_t block_count() const noexcept { return multiplicities.size(); }
  /// Index of the first column of block j.
  std::size_t block_offset(std::size_t j) const;

  /// All blocks of size one, S = I.
  static JordanSpec diagonal(const ComplexVector& eigenvalues);

  friend bool operator==(const JordanSpec&, const JordanSpec&) = default;
};

/// Throws Errc::kInvalidArgument on inconsistent sizes and Errc::kSingular
/// when the basis condition number exceeds defaults::kBasisCondition.
void validate(const JordanSpec& spec);

/// Block-diagonal J.
ComplexMatrix jordan_matrix(const JordanSpec& spec);

/// S J S^{-1}.
ComplexMatrix assemble(const JordanSpec& spec);

/// J^power from the closed form: block entry (k, n) is
/// C(power, n - k) * lambda^(power - n + k) for n >= k, zero otherwise.
ComplexMatrix jordan_power(const JordanSpec& spec, std::size_t power);

struct GeneratorCoordinates {
  std::vector<ComplexVector> blocks;

  ComplexVector concatenated() const;
};

/// psi = S^{-1} phi, split by block sizes.
GeneratorCoordinates generator_coordinates(const JordanSpec& spec,
                                           const ComplexVector& phi);

/// True iff every block's last coordinate (psi_j)_{m_j - 1} exceeds `tol` in
/// modulus. Default tol is 1e-10 * ||psi||_inf.
bool depends_on_all_generators(const JordanSpec& spec, const ComplexVector& phi,
                               std::optional<double> tol = std::nullopt);

/// Upper-left Hankel matrix H[k][n] = block[k + n] for k + n < m, else 0.
ComplexMatrix hankel_of(const ComplexVector& block);

/// Pairwise |a - b| > rel_tol * max|value| for all distinct entries.
bool pairwise_distinct(const ComplexVector& values, double rel_tol = 1e-9);

}  // namespace dynphase
