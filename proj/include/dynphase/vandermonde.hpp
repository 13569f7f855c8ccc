#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dynphase/linalg.hpp"

namespace dynphase {

/// Strictly increasing column exponents m_0 < m_1 < ...
class ExponentSelection {
 public:
  explicit ExponentSelection(std::vector<std::size_t> exponents);
  /// (0, 1, ..., n-1)
  static ExponentSelection consecutive(std::size_t n);

  const std::vector<std::size_t>& exponents() const noexcept { return exponents_; }
  std::size_t size() const noexcept { return exponents_.size(); }

 private:
  std::vector<std::size_t> exponents_;
};

/// Block sizes of a confluent (second kind) Vandermonde matrix.
class MultiplicityProfile {
 public:
  explicit MultiplicityProfile(std::vector<std::size_t> multiplicities);
  static MultiplicityProfile ones(std::size_t count);

  const std::vector<std::size_t>& multiplicities() const noexcept {
    return multiplicities_;
  }
  std::size_t size() const noexcept { return multiplicities_.size(); }
  std::size_t total() const noexcept { return total_; }

 private:
  std::vector<std::size_t> multiplicities_;
  std::size_t total_ = 0;
};

enum class SparkMethod {
  kEnumeration,
  kGeometricNodes,    // lambda_k = base^k, base^n != 1 for 0 < n < L
  kPositiveReal,      // distinct positive real nodes
  kDegenerate,        // criterion failed before any enumeration
};

struct SparkCertificate {
  bool full_spark = false;
  /// Lexicographically first d-subset of column indices whose submatrix is
  /// singular. Present iff !full_spark.
  std::optional<std::vector<std::size_t>> witness;
  /// min over enumerated subsets of |det| / prod(column norms). Absent when
  /// no enumeration was performed.
  std::optional<double> min_scaled_det;
  SparkMethod method = SparkMethod::kEnumeration;
  std::uint64_t subsets_checked = 0;
};

struct SparkOptions {
  double tol = 1e-10;
  std::uint64_t budget = 2'000'000;
};

/// d x L matrix with entry (k, l) = nodes[k]^l.
ComplexMatrix classical(const ComplexVector& nodes, std::size_t columns);

/// prod_{k > j} (nodes[k] - nodes[j]); equals det(classical(nodes, d)).
Complex det_product_classical(const ComplexVector& nodes);

/// Entry (k, l) = nodes[k]^{m_l}.
ComplexMatrix first_kind(const ComplexVector& nodes, const ExponentSelection& sel);

/// Schur function value det(first_kind) / prod_{k > j}(nodes[k] - nodes[j]).
/// Requires a square selection and pairwise distinct nodes.
Complex schur_value(const ComplexVector& nodes, const ExponentSelection& sel,
                    double distinct_tol = 1e-9);

/// Confluent Vandermonde: block j stacks rows k = 0..m_j-1 with entries
/// C(l, k) * nodes[j]^(l - k), where C(l, k) = 0 for k > l.
ComplexMatrix second_kind(const ComplexVector& nodes, const MultiplicityProfile& prof,
                          std::size_t columns);

/// prod_{k < j} (nodes[j] - nodes[k])^(m_k * m_j).
Complex det_product_second_kind(const ComplexVector& nodes,
                                const MultiplicityProfile& prof);

/// Exhaustive check that every d-column submatrix of the d x L matrix is
/// invertible. Throws Errc::kBudgetExceeded when C(L, d) > options.budget.
SparkCertificate full_spark(const ComplexMatrix& matrix, const SparkOptions& options = {});

/// Calls `visit(indices)` for each k-subset of {0..n-1} in lexicographic
/// order until it returns false.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace dynphase
