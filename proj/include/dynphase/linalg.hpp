#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dynphase {

using Complex = std::complex<double>;

namespace defaults {
inline constexpr double kAbsoluteTol = 1e-10;
inline constexpr double kRelativeTol = 1e-8;
/// Eigenvector-basis condition number above which a matrix is reported as
/// numerically defective.
inline constexpr double kDefectiveCondition = 1e8;
/// Condition number above which an explicitly supplied basis is singular.
inline constexpr double kBasisCondition = 1e12;
}  // namespace defaults

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim, Complex fill = {})
      : data_(dim, fill) {}
  ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<Complex> values)
      : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }
  const std::vector<Complex>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<Complex> data_;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const ComplexVector& entries);
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Complex> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Complex> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, const ComplexVector& values);

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Elementwise helpers.
ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(Complex s, const ComplexVector& v);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& m);

bool all_finite(const ComplexVector& v) noexcept;
bool all_finite(const ComplexMatrix& m) noexcept;
void require_finite(const ComplexVector& v, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);

/// Standard inner product, linear in the first argument and conjugate-linear
/// in the second: <x, y> = sum_k x_k conj(y_k).
Complex inner_product(const ComplexVector& x, const ComplexVector& y);
double norm(const ComplexVector& x);
double max_abs(const ComplexVector& x) noexcept;
double frobenius_norm(const ComplexMatrix& m);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);
ComplexMatrix adjoint(const ComplexMatrix& m);

/// LU factorisation with partial pivoting, P*A = L*U.
class LuDecomposition {
 public:
  /// `pivot_tol` is relative to the largest entry of the input.
  explicit LuDecomposition(const ComplexMatrix& a,
                           double pivot_tol = defaults::kAbsoluteTol);

  std::size_t size() const noexcept { return lu_.rows(); }
  bool singular() const noexcept { return singular_; }
  Complex determinant() const;
  ComplexVector solve(const ComplexVector& b) const;
  ComplexMatrix solve(const ComplexMatrix& b) const;

 private:
  void require_regular() const;

  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

Complex determinant(const ComplexMatrix& m);
ComplexVector solve(const ComplexMatrix& a, const ComplexVector& b);
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& m);

struct Eigensystem {
  ComplexVector values;
  /// Unit-norm eigenvectors as columns, parallel to `values`.
  ComplexMatrix vectors;
  /// 2-norm condition number of `vectors`.
  double condition = 0.0;
};

/// Eigendecomposition of a diagonalizable matrix. Throws Errc::kDefective
/// when the eigenvector basis is worse conditioned than `condition_limit`.
Eigensystem eigendecompose(const ComplexMatrix& m,
                           double condition_limit = defaults::kDefectiveCondition);

/// Singular values in descending order.
std::vector<double> singular_values(const ComplexMatrix& m);
double condition_number(const ComplexMatrix& m);
/// Number of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const ComplexMatrix& m,
                           double rel_tol = defaults::kAbsoluteTol);

/// Minimiser of ||m x - b||_2 for m with full column rank.
ComplexVector solve_least_squares(const ComplexMatrix& m, const ComplexVector& b,
                                  double rank_tol = defaults::kAbsoluteTol);

/// Orthonormal basis (as columns) for the span of the columns of `m`,
/// dropping columns that are dependent to within rel_tol.
ComplexMatrix orthonormal_basis(const ComplexMatrix& m,
                                double rel_tol = defaults::kAbsoluteTol);

}  // namespace dynphase
