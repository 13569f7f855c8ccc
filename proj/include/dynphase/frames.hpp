#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dynphase/linalg.hpp"
#include "dynphase/spectral.hpp"
#include "dynphase/vandermonde.hpp"

namespace dynphase {

/// The family {A^l phi}_{l=0}^{L-1}, materialised by iterated matvec.
class DynamicalFrame {
 public:
  /// Throws Errc::kDimensionMismatch unless `op` is d x d and `generator`
  /// has length d; `length` must be at least 1.
  static DynamicalFrame build(ComplexMatrix op, ComplexVector generator,
                              std::size_t length);

  const ComplexMatrix& op() const noexcept { return op_; }
  const ComplexVector& generator() const noexcept { return generator_; }
  std::size_t length() const noexcept { return vectors_.size(); }
  std::size_t dimension() const noexcept { return generator_.size(); }

  const std::vector<ComplexVector>& vectors() const noexcept { return vectors_; }
  const ComplexVector& vector(std::size_t l) const { return vectors_.at(l); }

  /// d x L matrix with columns A^l phi.
  ComplexMatrix synthesis() const;
  /// c_l = <x, A^l phi>.
  ComplexVector coefficients(const ComplexVector& x) const;

 private:
  DynamicalFrame(ComplexMatrix op, ComplexVector generator,
                 std::vector<ComplexVector> vectors)
      : op_(std::move(op)), generator_(std::move(generator)),
        vectors_(std::move(vectors)) {}

  ComplexMatrix op_;
  ComplexVector generator_;
  std::vector<ComplexVector> vectors_;
};

struct FrameAnalysis {
  bool is_frame = false;
  /// Optimal frame bounds: squared extreme singular values of the synthesis
  /// matrix (lower bound is zero when L < d).
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::optional<SparkCertificate> spark;
};

struct AnalyzeOptions {
  /// is_frame iff sigma_min > rank_tol * sigma_max.
  double rank_tol = 1e-10;
  /// Run the exhaustive spark enumeration on the synthesis matrix.
  bool certify_spark = false;
  SparkOptions spark;
};

FrameAnalysis analyze(const DynamicalFrame& frame, const AnalyzeOptions& options = {});

/// Diagonalizable case: eigenvalues pairwise separated by more than `tol`
/// and every coordinate of psi = S^{-1} phi above tol * ||psi||_inf.
bool frame_criterion_diagonalizable(const ComplexVector& eigenvalues,
                                    const ComplexVector& psi, double tol = 1e-10);

/// Block eigenvalues pairwise distinct and phi depends on every Jordan
/// generator.
bool frame_criterion_jordan(const JordanSpec& spec, const ComplexVector& phi,
                            std::optional<double> tol = std::nullopt);

/// Canonical dual written as {B^l phi~}: T = sum_l (A^l phi)(A^l phi)^*,
/// B = T^{-1} A T, phi~ = T^{-1} phi.
class DualFrame {
 public:
  const ComplexMatrix& frame_operator() const noexcept { return frame_operator_; }
  const ComplexMatrix& op() const noexcept { return op_; }
  const ComplexVector& generator() const noexcept { return generator_; }
  std::size_t length() const noexcept { return length_; }

  /// B^l phi~ for l = 0..L-1, evaluated as T^{-1} A^l phi.
  std::vector<ComplexVector> vectors() const;

  /// x = T^{-1} sum_l c_l A^l phi, evaluated with a solve against T.
  ComplexVector reconstruct(const ComplexVector& coefficients) const;

 private:
  friend DualFrame dual(const DynamicalFrame& frame);
  DualFrame(ComplexMatrix t, ComplexMatrix b, ComplexVector phi_tilde,
            ComplexMatrix synthesis, LuDecomposition t_lu)
      : frame_operator_(std::move(t)), op_(std::move(b)),
        generator_(std::move(phi_tilde)), synthesis_(std::move(synthesis)),
        t_lu_(std::move(t_lu)), length_(synthesis_.cols()) {}

  ComplexMatrix frame_operator_;
  ComplexMatrix op_;
  ComplexVector generator_;
  ComplexMatrix synthesis_;
  LuDecomposition t_lu_;
  std::size_t length_;
};

/// Throws Errc::kNotAFrame when the family does not span C^d.
DualFrame dual(const DynamicalFrame& frame);

/// Circulant matrix with first column `a`: C(i, j) = a[(i - j) mod d].
ComplexMatrix circulant(const ComplexVector& first_column);

/// a^_j = sum_k a_k exp(-2 pi i j k / d), computed directly.
ComplexVector dft(const ComplexVector& a);

struct CirculantFrame {
  DynamicalFrame frame;
  /// Fourier coefficients of a distinct and of phi nonvanishing.
  bool criterion;
};

CirculantFrame circulant_frame(const ComplexVector& a, const ComplexVector& phi,
                               std::size_t length, double tol = 1e-10);

/// A = diag(w^0, ..., w^{d-1}) with w = exp(2 pi i / L), phi = (1, ..., 1).
DynamicalFrame harmonic_frame(std::size_t dimension, std::size_t length);

/// 2 x 2 rotation by `theta`.
ComplexMatrix rotation(double theta);

/// Full-spark certificate for a diagonalizable A with eigenvalues `lambda`
/// and eigen-coordinates psi. Distinct positive real nodes and geometric
/// nodes lambda_k = w^k (w != 0, w^n != 1 for 0 < n < L) are certified without
/// enumerating; otherwise the classical d x L Vandermonde is enumerated.
SparkCertificate full_spark_criterion(const ComplexVector& lambda,
                                      const ComplexVector& psi, std::size_t length,
                                      const SparkOptions& options = {});

}  // namespace dynphase
