#include "dynphase/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dynphase/error.hpp"
#include "dynphase/kernels.hpp"
#include "eigen_bridge.hpp"

namespace dynphase {

namespace {

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_size(const ComplexVector& a, const ComplexVector& b,
                       const char* op) {
  if (a.size() != b.size()) {
    fail(Errc::kDimensionMismatch, std::string(op) + ": vector sizes " +
                                       std::to_string(a.size()) + " and " +
                                       std::to_string(b.size()));
  }
}

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.square()) {
    fail(Errc::kDimensionMismatch,
         std::string(op) + ": expected square matrix, got " + dims(m));
  }
}

double max_abs_entry(const ComplexMatrix& m) {
  double out = 0.0;
  for (const Complex& z : m.data()) out = std::max(out, std::abs(z));
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      fail(Errc::kDimensionMismatch, "ragged matrix initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(const ComplexVector& entries) {
  ComplexMatrix out(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out(i, i) = entries[i];
  return out;
}

ComplexMatrix ComplexMatrix::from_columns(
    std::span<const ComplexVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix out(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.set_column(c, columns[c]);
  }
  return out;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, const ComplexVector& values) {
  if (values.size() != rows_) {
    fail(Errc::kDimensionMismatch, "set_column: length " +
                                       std::to_string(values.size()) +
                                       " for matrix " + dims(*this));
  }
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  require_same_size(a, b, "operator+");
  ComplexVector out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
  return out;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  require_same_size(a, b, "operator-");
  ComplexVector out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b[k];
  return out;
}

ComplexVector operator*(Complex s, const ComplexVector& v) {
  ComplexVector out = v;
  for (Complex& z : out) z *= s;
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(Errc::kDimensionMismatch, "operator+: " + dims(a) + " vs " + dims(b));
  }
  ComplexMatrix out = a;
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] += b.data()[k];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(Errc::kDimensionMismatch, "operator-: " + dims(a) + " vs " + dims(b));
  }
  ComplexMatrix out = a;
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= b.data()[k];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (Complex& z : out.data()) z *= s;
  return out;
}

bool all_finite(const ComplexVector& v) noexcept {
  return std::all_of(v.begin(), v.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool all_finite(const ComplexMatrix& m) noexcept {
  return std::all_of(m.data().begin(), m.data().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void require_finite(const ComplexVector& v, const char* what) {
  if (!all_finite(v)) fail(Errc::kNonFinite, std::string(what) + " has NaN/Inf entries");
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) fail(Errc::kNonFinite, std::string(what) + " has NaN/Inf entries");
}

Complex inner_product(const ComplexVector& x, const ComplexVector& y) {
  require_same_size(x, y, "inner_product");
  return kernels::dotc(x.span(), y.span());
}

double norm(const ComplexVector& x) { return std::sqrt(kernels::norm_sq(x.span())); }

double max_abs(const ComplexVector& x) noexcept {
  double out = 0.0;
  for (const Complex& z : x) out = std::max(out, std::abs(z));
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  return std::sqrt(kernels::norm_sq(m.data()));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    fail(Errc::kDimensionMismatch, "matmul: " + dims(a) + " * " + dims(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      kernels::axpy(aik, b.row(k), out_row);
    }
  }
  return out;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.cols() != x.size()) {
    fail(Errc::kDimensionMismatch, "matvec: " + dims(a) + " * vector of length " +
                                       std::to_string(x.size()));
  }
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out[i] = kernels::dotu(a.row(i), x.span());
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
  }
  return out;
}

LuDecomposition::LuDecomposition(const ComplexMatrix& a, double pivot_tol)
    : lu_(a), perm_(a.rows()) {
  require_square(a, "LU");
  require_finite(a, "LU input");
  const std::size_t n = a.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double threshold = pivot_tol * max_abs_entry(a);
  if (n > 0 && max_abs_entry(a) == 0.0) singular_ = true;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (pivot != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(),
                       lu_.row(pivot).begin());
      std::swap(perm_[k], perm_[pivot]);
      sign_ = -sign_;
    }
    if (best <= threshold) singular_ = true;
    if (best == 0.0) continue;

    const Complex inv_pivot = 1.0 / lu_(k, k);
    const auto pivot_tail = lu_.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = lu_(i, k) * inv_pivot;
      lu_(i, k) = factor;
      if (factor != Complex{}) {
        kernels::axpy(-factor, pivot_tail, lu_.row(i).subspan(k + 1));
      }
    }
  }
}

Complex LuDecomposition::determinant() const {
  Complex det(static_cast<double>(sign_), 0.0);
  for (std::size_t k = 0; k < lu_.rows(); ++k) det *= lu_(k, k);
  return det;
}

void LuDecomposition::require_regular() const {
  if (singular_) fail(Errc::kSingular, "matrix is numerically singular");
}

ComplexVector LuDecomposition::solve(const ComplexVector& b) const {
  require_regular();
  const std::size_t n = lu_.rows();
  if (b.size() != n) {
    fail(Errc::kDimensionMismatch, "LU solve: rhs length " +
                                       std::to_string(b.size()) + " for n=" +
                                       std::to_string(n));
  }
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    x[i] -= kernels::dotu(lu_.row(i).first(i), x.span().first(i));
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto tail = lu_.row(i).subspan(i + 1);
    x[i] = (x[i] - kernels::dotu(tail, x.span().subspan(i + 1))) / lu_(i, i);
  }
  return x;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& b) const {
  if (b.rows() != lu_.rows()) {
    fail(Errc::kDimensionMismatch, "LU solve: rhs " + dims(b));
  }
  ComplexMatrix out(b.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) out.set_column(c, solve(b.column(c)));
  return out;
}

Complex determinant(const ComplexMatrix& m) {
  require_square(m, "determinant");
  return LuDecomposition(m, 0.0).determinant();
}

ComplexVector solve(const ComplexMatrix& a, const ComplexVector& b) {
  return LuDecomposition(a).solve(b);
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  return LuDecomposition(a).solve(b);
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  require_square(m, "inverse");
  return LuDecomposition(m).solve(ComplexMatrix::identity(m.rows()));
}

Eigensystem eigendecompose(const ComplexMatrix& m, double condition_limit) {
  require_square(m, "eigendecompose");
  require_finite(m, "eigendecompose input");
  Eigensystem out;
  if (m.rows() == 0) return out;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m), true);
  if (solver.info() != Eigen::Success) {
    fail(Errc::kNonConvergence, "eigendecompose: QR iteration did not converge");
  }
  out.values = detail::from_eigen_vector(solver.eigenvalues());
  Eigen::MatrixXcd vectors = solver.eigenvectors();
  vectors.colwise().normalize();
  out.vectors = detail::from_eigen(vectors);
  out.condition = condition_number(out.vectors);
  if (!(out.condition <= condition_limit)) {
    fail(Errc::kDefective,
         "eigendecompose: eigenvector basis condition " +
             std::to_string(out.condition) +
             " exceeds limit; matrix is numerically defective, supply a Jordan spec");
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values input");
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double condition_number(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [&](double v) { return v > rel_tol * s.front(); }));
}

ComplexVector solve_least_squares(const ComplexMatrix& m, const ComplexVector& b,
                                  double rank_tol) {
  if (m.rows() < m.cols()) {
    fail(Errc::kInvalidArgument,
         "solve_least_squares: underdetermined system " + dims(m));
  }
  if (b.size() != m.rows()) {
    fail(Errc::kDimensionMismatch, "solve_least_squares: rhs length " +
                                       std::to_string(b.size()) + " for " + dims(m));
  }
  require_finite(m, "least-squares matrix");
  require_finite(b, "least-squares rhs");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(detail::to_eigen(m));
  qr.setThreshold(rank_tol);
  if (static_cast<std::size_t>(qr.rank()) < m.cols()) {
    fail(Errc::kSingular, "solve_least_squares: rank " + std::to_string(qr.rank()) +
                              " < " + std::to_string(m.cols()) + " columns");
  }
  return detail::from_eigen_vector(qr.solve(detail::to_eigen(b)));
}

ComplexMatrix orthonormal_basis(const ComplexMatrix& m, double rel_tol) {
  std::vector<ComplexVector> basis;
  double scale = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c) scale = std::max(scale, norm(m.column(c)));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    ComplexVector v = m.column(c);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexVector& q : basis) {
        kernels::axpy(-kernels::dotc(v.span(), q.span()), q.span(), v.span());
      }
    }
    const double len = norm(v);
    if (len <= rel_tol * scale || len == 0.0) continue;
    basis.push_back((1.0 / len) * v);
  }
  if (basis.empty()) return ComplexMatrix(m.rows(), 0);
  return ComplexMatrix::from_columns(basis);
}

}  // namespace dynphase
