#include "dynphase/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dynphase/error.hpp"
#include "dynphase/numeric.hpp"
#include "dynphase/spectral.hpp"

namespace dynphase {

ExponentSelection::ExponentSelection(std::vector<std::size_t> exponents)
    : exponents_(std::move(exponents)) {
  for (std::size_t i = 1; i < exponents_.size(); ++i) {
    if (exponents_[i] <= exponents_[i - 1]) {
      fail(Errc::kInvalidArgument, "exponent selection must be strictly increasing");
    }
  }
}

ExponentSelection ExponentSelection::consecutive(std::size_t n) {
  std::vector<std::size_t> e(n);
  std::iota(e.begin(), e.end(), std::size_t{0});
  return ExponentSelection(std::move(e));
}

MultiplicityProfile::MultiplicityProfile(std::vector<std::size_t> multiplicities)
    : multiplicities_(std::move(multiplicities)) {
  for (std::size_t m : multiplicities_) {
    if (m == 0) fail(Errc::kInvalidArgument, "multiplicities must be positive");
    total_ += m;
  }
}

MultiplicityProfile MultiplicityProfile::ones(std::size_t count) {
  return MultiplicityProfile(std::vector<std::size_t>(count, 1));
}

ComplexMatrix classical(const ComplexVector& nodes, std::size_t columns) {
  if (columns == 0) fail(Errc::kInvalidArgument, "classical: need at least one column");
  ComplexMatrix out(nodes.size(), columns);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Complex power(1.0, 0.0);
    for (std::size_t l = 0; l < columns; ++l) {
      out(k, l) = power;
      power *= nodes[k];
    }
  }
  return out;
}

Complex det_product_classical(const ComplexVector& nodes) {
  Complex out(1.0, 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) out *= nodes[k] - nodes[j];
  }
  return out;
}

ComplexMatrix first_kind(const ComplexVector& nodes, const ExponentSelection& sel) {
  ComplexMatrix out(nodes.size(), sel.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t l = 0; l < sel.size(); ++l) {
      out(k, l) = ipow(nodes[k], sel.exponents()[l]);
    }
  }
  return out;
}

Complex schur_value(const ComplexVector& nodes, const ExponentSelection& sel,
                    double distinct_tol) {
  if (sel.size() != nodes.size()) {
    fail(Errc::kDimensionMismatch, "schur_value: selection of length " +
                                       std::to_string(sel.size()) + " for " +
                                       std::to_string(nodes.size()) + " nodes");
  }
  if (!pairwise_distinct(nodes, distinct_tol)) {
    fail(Errc::kInvalidArgument, "schur_value: nodes are not pairwise distinct");
  }
  return determinant(first_kind(nodes, sel)) / det_product_classical(nodes);
}

ComplexMatrix second_kind(const ComplexVector& nodes, const MultiplicityProfile& prof,
                          std::size_t columns) {
  if (columns == 0) fail(Errc::kInvalidArgument, "second_kind: need at least one column");
  if (nodes.size() != prof.size()) {
    fail(Errc::kDimensionMismatch, "second_kind: " + std::to_string(nodes.size()) +
                                       " nodes for " + std::to_string(prof.size()) +
                                       " blocks");
  }
  ComplexMatrix out(prof.total(), columns);
  std::size_t row = 0;
  for (std::size_t j = 0; j < prof.size(); ++j) {
    for (std::size_t k = 0; k < prof.multiplicities()[j]; ++k, ++row) {
      for (std::size_t l = k; l < columns; ++l) {
        out(row, l) = static_cast<double>(binomial(l, k)) * ipow(nodes[j], l - k);
      }
    }
  }
  return out;
}

Complex det_product_second_kind(const ComplexVector& nodes,
                                const MultiplicityProfile& prof) {
  if (nodes.size() != prof.size()) {
    fail(Errc::kDimensionMismatch, "det_product_second_kind: size mismatch");
  }
  const auto& m = prof.multiplicities();
  Complex out(1.0, 0.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      out *= ipow(nodes[j] - nodes[k], m[k] * m[j]);
    }
  }
  return out;
}

SparkCertificate full_spark(const ComplexMatrix& matrix, const SparkOptions& options) {
  const std::size_t d = matrix.rows();
  const std::size_t len = matrix.cols();
  if (d == 0 || d > len) {
    fail(Errc::kInvalidArgument, "full_spark: need 0 < rows <= cols, got " +
                                     std::to_string(d) + "x" + std::to_string(len));
  }
  require_finite(matrix, "full_spark input");
  const std::uint64_t count = binomial_saturated(len, d);
  if (count > options.budget) {
    fail(Errc::kBudgetExceeded, "full_spark: C(" + std::to_string(len) + ", " +
                                    std::to_string(d) + ") subsets exceed budget " +
                                    std::to_string(options.budget));
  }

  std::vector<double> col_norms(len);
  for (std::size_t c = 0; c < len; ++c) col_norms[c] = norm(matrix.column(c));

  SparkCertificate cert;
  cert.method = SparkMethod::kEnumeration;
  double min_scaled = std::numeric_limits<double>::infinity();
  ComplexMatrix sub(d, d);
  for_each_combination(len, d, [&](const std::vector<std::size_t>& cols) {
    double scale = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      scale *= col_norms[cols[i]];
      for (std::size_t r = 0; r < d; ++r) sub(r, i) = matrix(r, cols[i]);
    }
    const double scaled =
        scale == 0.0 ? 0.0 : std::abs(LuDecomposition(sub, 0.0).determinant()) / scale;
    min_scaled = std::min(min_scaled, scaled);
    if (!(scaled > options.tol) && !cert.witness) cert.witness = cols;
    ++cert.subsets_checked;
    return true;
  });
  cert.full_spark = !cert.witness.has_value();
  cert.min_scaled_det = min_scaled;
  return cert;
}

}  // namespace dynphase
