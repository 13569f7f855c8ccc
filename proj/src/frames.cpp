#include "dynphase/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dynphase/error.hpp"
#include "dynphase/numeric.hpp"

namespace dynphase {

namespace {

bool coordinates_nonvanishing(const ComplexVector& psi, double tol) {
  const double top = max_abs(psi);
  if (top == 0.0) return false;
  return std::all_of(psi.begin(), psi.end(),
                     [&](const Complex& z) { return std::abs(z) > tol * top; });
}

std::vector<std::size_t> first_subset(std::size_t d) {
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// Unit root exp(sign * 2 pi i * num / den) with the angle reduced first.
Complex unit_root(std::size_t num, std::size_t den, double sign) {
  const double angle =
      sign * 2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
  return std::polar(1.0, angle);
}

}  // namespace

DynamicalFrame DynamicalFrame::build(ComplexMatrix op, ComplexVector generator,
                                     std::size_t length) {
  if (!op.square() || op.rows() != generator.size()) {
    fail(Errc::kDimensionMismatch,
         "dynamical frame: operator is " + std::to_string(op.rows()) + "x" +
             std::to_string(op.cols()) + ", generator has length " +
             std::to_string(generator.size()));
  }
  if (generator.empty()) fail(Errc::kInvalidArgument, "dynamical frame: empty generator");
  if (length == 0) fail(Errc::kInvalidArgument, "dynamical frame: length must be >= 1");
  require_finite(op, "frame operator");
  require_finite(generator, "frame generator");

  std::vector<ComplexVector> vectors;
  vectors.reserve(length);
  vectors.push_back(generator);
  for (std::size_t l = 1; l < length; ++l) vectors.push_back(matvec(op, vectors.back()));
  return DynamicalFrame(std::move(op), std::move(generator), std::move(vectors));
}

ComplexMatrix DynamicalFrame::synthesis() const {
  return ComplexMatrix::from_columns(vectors_);
}

ComplexVector DynamicalFrame::coefficients(const ComplexVector& x) const {
  ComplexVector out(vectors_.size());
  for (std::size_t l = 0; l < vectors_.size(); ++l) out[l] = inner_product(x, vectors_[l]);
  return out;
}

FrameAnalysis analyze(const DynamicalFrame& frame, const AnalyzeOptions& options) {
  const ComplexMatrix phi = frame.synthesis();
  const std::vector<double> s = singular_values(phi);
  const std::size_t d = frame.dimension();
  FrameAnalysis out;
  out.upper_bound = s.front() * s.front();
  if (frame.length() >= d) {
    const double smallest = s[d - 1];
    out.lower_bound = smallest * smallest;
    out.is_frame = smallest > options.rank_tol * s.front();
    if (options.certify_spark) out.spark = full_spark(phi, options.spark);
  }
  return out;
}

bool frame_criterion_diagonalizable(const ComplexVector& eigenvalues,
                                    const ComplexVector& psi, double tol) {
  if (eigenvalues.size() != psi.size()) {
    fail(Errc::kDimensionMismatch, "frame criterion: eigenvalue/coordinate length mismatch");
  }
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      if (!(std::abs(eigenvalues[i] - eigenvalues[j]) > tol)) return false;
    }
  }
  return coordinates_nonvanishing(psi, tol);
}

bool frame_criterion_jordan(const JordanSpec& spec, const ComplexVector& phi,
                            std::optional<double> tol) {
  validate(spec);
  return pairwise_distinct(spec.eigenvalues) &&
         depends_on_all_generators(spec, phi, tol);
}

std::vector<ComplexVector> DualFrame::vectors() const {
  std::vector<ComplexVector> out;
  out.reserve(length_);
  // B^l phi~ = T^{-1} A^l phi. Iterating B instead multiplies the rounding
  // error by up to cond(T) per step.
  for (std::size_t l = 0; l < length_; ++l) out.push_back(t_lu_.solve(synthesis_.column(l)));
  return out;
}

ComplexVector DualFrame::reconstruct(const ComplexVector& coefficients) const {
  if (coefficients.size() != length_) {
    fail(Errc::kDimensionMismatch, "reconstruct: expected " + std::to_string(length_) +
                                       " coefficients, got " +
                                       std::to_string(coefficients.size()));
  }
  return t_lu_.solve(matvec(synthesis_, coefficients));
}

DualFrame dual(const DynamicalFrame& frame) {
  if (!analyze(frame).is_frame) {
    fail(Errc::kNotAFrame, "dual: the family does not span C^d");
  }
  ComplexMatrix synthesis = frame.synthesis();
  ComplexMatrix t = matmul(synthesis, adjoint(synthesis));
  LuDecomposition t_lu(t, 0.0);
  if (t_lu.singular()) fail(Errc::kNotAFrame, "dual: frame operator is singular");
  ComplexMatrix b = t_lu.solve(matmul(frame.op(), t));
  ComplexVector phi_tilde = t_lu.solve(frame.generator());
  return DualFrame(std::move(t), std::move(b), std::move(phi_tilde), std::move(synthesis),
                   std::move(t_lu));
}

ComplexMatrix circulant(const ComplexVector& first_column) {
  const std::size_t d = first_column.size();
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) out(i, j) = first_column[(i + d - j) % d];
  }
  return out;
}

ComplexVector dft(const ComplexVector& a) {
  const std::size_t d = a.size();
  ComplexVector out(d);
  for (std::size_t j = 0; j < d; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < d; ++k) acc += a[k] * unit_root(j * k, d, -1.0);
    out[j] = acc;
  }
  return out;
}

CirculantFrame circulant_frame(const ComplexVector& a, const ComplexVector& phi,
                               std::size_t length, double tol) {
  if (a.size() != phi.size()) {
    fail(Errc::kDimensionMismatch, "circulant_frame: a and phi lengths differ");
  }
  if (length < a.size()) {
    fail(Errc::kInvalidArgument, "circulant_frame: length must be >= dimension");
  }
  DynamicalFrame frame = DynamicalFrame::build(circulant(a), phi, length);
  const bool criterion = pairwise_distinct(dft(a)) && coordinates_nonvanishing(dft(phi), tol);
  return CirculantFrame{std::move(frame), criterion};
}

DynamicalFrame harmonic_frame(std::size_t dimension, std::size_t length) {
  if (dimension == 0 || length < dimension) {
    fail(Errc::kInvalidArgument, "harmonic_frame: need 1 <= d <= L");
  }
  ComplexVector diag(dimension);
  for (std::size_t k = 0; k < dimension; ++k) diag[k] = unit_root(k, length, 1.0);
  return DynamicalFrame::build(ComplexMatrix::diagonal(diag),
                               ComplexVector(dimension, Complex(1.0, 0.0)), length);
}

ComplexMatrix rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return ComplexMatrix{{c, -s}, {s, c}};
}

SparkCertificate full_spark_criterion(const ComplexVector& lambda, const ComplexVector& psi,
                                      std::size_t length, const SparkOptions& options) {
  const std::size_t d = lambda.size();
  if (psi.size() != d) {
    fail(Errc::kDimensionMismatch, "full_spark_criterion: lambda/psi length mismatch");
  }
  if (d == 0 || length < d) {
    fail(Errc::kInvalidArgument, "full_spark_criterion: need 1 <= d <= L");
  }
  require_finite(lambda, "eigenvalues");
  require_finite(psi, "eigen-coordinates");

  SparkCertificate cert;
  if (!coordinates_nonvanishing(psi, options.tol) || !pairwise_distinct(lambda)) {
    // Every d-subset fails, so the first one is the lexicographic witness.
    cert.method = SparkMethod::kDegenerate;
    cert.witness = first_subset(d);
    return cert;
  }

  constexpr double kNodeTol = 1e-9;
  const bool positive_real = std::all_of(lambda.begin(), lambda.end(), [](const Complex& z) {
    return std::abs(z.imag()) <= kNodeTol * std::max(1.0, std::abs(z)) && z.real() > kNodeTol;
  });
  if (positive_real) {
    cert.full_spark = true;
    cert.method = SparkMethod::kPositiveReal;
    return cert;
  }

  if (d >= 2 && std::abs(lambda[0] - 1.0) <= kNodeTol) {
    const Complex base = lambda[1];
    bool geometric = std::abs(base) > kNodeTol;
    for (std::size_t k = 2; geometric && k < d; ++k) {
      const Complex expected = ipow(base, k);
      geometric = std::abs(lambda[k] - expected) <= kNodeTol * std::max(1.0, std::abs(expected));
    }
    Complex power = base;
    for (std::size_t n = 1; geometric && n < length; ++n, power *= base) {
      geometric = std::abs(power - 1.0) > kNodeTol;
    }
    if (geometric) {
      cert.full_spark = true;
      cert.method = SparkMethod::kGeometricNodes;
      return cert;
    }
  }

  return full_spark(classical(lambda, length), options);
}

}  // namespace dynphase
