#pragma once

#include <complex>
#include <span>

namespace dynphase {

/// Two shift angles with alpha1 - alpha2 outside pi*Z, enforced as
/// |sin(alpha1 - alpha2)| > angle_tol.
class PolarizationAngles {
 public:
  PolarizationAngles(double first, double second, double angle_tol = 1e-9);

  /// (0, pi/2): |sin(alpha1 - alpha2)| = 1.
  static PolarizationAngles standard();

  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }
  PolarizationAngles negated() const { return {-first_, -second_}; }

  friend bool operator==(const PolarizationAngles&, const PolarizationAngles&) = default;

 private:
  double first_;
  double second_;
};

/// |z1|, |z2|, |z1 + e^{i alpha1} z2|, |z1 + e^{i alpha2} z2|.
struct PolarizationData {
  double modulus1 = 0.0;
  double modulus2 = 0.0;
  double shifted1 = 0.0;
  double shifted2 = 0.0;
};

PolarizationData forward(std::complex<double> z1, std::complex<double> z2,
                         const PolarizationAngles& angles);

/// conj(z1) * z2 from the four magnitudes. Throws Errc::kZeroMagnitude when
/// either modulus is numerically zero and Errc::kInconsistentData when an
/// extracted cosine leaves [-1 - consistency_tol, 1 + consistency_tol].
std::complex<double> recover_product(const PolarizationData& data,
                                     const PolarizationAngles& angles,
                                     double consistency_tol = 1e-6);

/// Real case: z1 * z2 from |z1|, |z2| and |z1 + sign * z2| with sign = +-1.
double recover_product_real(double modulus1, double modulus2, double shifted, int sign);

/// conj(z1) z2 = (1/K) sum_k zeta^k |z1 + zeta^{-k} z2|^2 with
/// zeta = exp(2 pi i / K); magnitudes[k] = |z1 + zeta^{-k} z2|, K >= 3.
std::complex<double> recover_product_roots_of_unity(std::span<const double> magnitudes);

}  // namespace dynphase
