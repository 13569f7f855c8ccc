#include "dynphase/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dynphase/error.hpp"

namespace dynphase {

namespace {

bool numerically_zero(double m, double m1, double m2) {
  return !(m > 1e-12 * std::max({m1, m2, 1.0}));
}

double clamp_cosine(double r, double tol) {
  if (!std::isfinite(r) || std::abs(r) > 1.0 + tol) {
    fail(Errc::kInconsistentData,
         "polarization: extracted cosine " + std::to_string(r) + " outside [-1, 1]");
  }
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

PolarizationAngles::PolarizationAngles(double first, double second, double angle_tol)
    : first_(first), second_(second) {
  if (!std::isfinite(first) || !std::isfinite(second) ||
      !(std::abs(std::sin(first - second)) > angle_tol)) {
    fail(Errc::kInvalidArgument,
         "polarization angles must differ by a non-multiple of pi");
  }
}

PolarizationAngles PolarizationAngles::standard() {
  return {0.0, std::numbers::pi / 2.0};
}

PolarizationData forward(std::complex<double> z1, std::complex<double> z2,
                         const PolarizationAngles& angles) {
  return PolarizationData{std::abs(z1), std::abs(z2),
                          std::abs(z1 + std::polar(1.0, angles.first()) * z2),
                          std::abs(z1 + std::polar(1.0, angles.second()) * z2)};
}

std::complex<double> recover_product(const PolarizationData& data,
                                     const PolarizationAngles& angles,
                                     double consistency_tol) {
  const double m1 = data.modulus1, m2 = data.modulus2;
  if (numerically_zero(m1, m1, m2) || numerically_zero(m2, m1, m2)) {
    fail(Errc::kZeroMagnitude, "polarization: a modulus is zero");
  }
  // |z1 + e^{i a} z2|^2 = m1^2 + m2^2 + 2 m1 m2 cos(delta + a), delta = arg z2 - arg z1.
  const double base = m1 * m1 + m2 * m2;
  const double denom = 2.0 * m1 * m2;
  const double r1 = clamp_cosine((data.shifted1 * data.shifted1 - base) / denom, consistency_tol);
  const double r2 = clamp_cosine((data.shifted2 * data.shifted2 - base) / denom, consistency_tol);

  // r_k = cos(a_k) cos(delta) - sin(a_k) sin(delta); determinant sin(a1 - a2).
  const double c1 = std::cos(angles.first()), s1 = std::sin(angles.first());
  const double c2 = std::cos(angles.second()), s2 = std::sin(angles.second());
  const double det = std::sin(angles.first() - angles.second());
  double cos_delta = (s1 * r2 - s2 * r1) / det;
  double sin_delta = (c1 * r2 - c2 * r1) / det;
  const double radius = std::hypot(cos_delta, sin_delta);
  if (radius == 0.0 || !std::isfinite(radius)) {
    fail(Errc::kInconsistentData, "polarization: relative phase is undetermined");
  }
  cos_delta /= radius;
  sin_delta /= radius;
  return {m1 * m2 * cos_delta, m1 * m2 * sin_delta};
}

double recover_product_real(double modulus1, double modulus2, double shifted, int sign) {
  if (sign != 1 && sign != -1) {
    fail(Errc::kInvalidArgument, "real polarization: sign must be +1 or -1");
  }
  if (numerically_zero(modulus1, modulus1, modulus2) ||
      numerically_zero(modulus2, modulus1, modulus2)) {
    fail(Errc::kZeroMagnitude, "real polarization: a modulus is zero");
  }
  return (shifted * shifted - modulus1 * modulus1 - modulus2 * modulus2) /
         (2.0 * static_cast<double>(sign));
}

std::complex<double> recover_product_roots_of_unity(std::span<const double> magnitudes) {
  const std::size_t count = magnitudes.size();
  if (count < 3) {
    fail(Errc::kInvalidArgument, "roots-of-unity polarization needs K >= 3 magnitudes");
  }
  std::complex<double> acc{};
  for (std::size_t k = 0; k < count; ++k) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    acc += std::polar(magnitudes[k] * magnitudes[k], angle);
  }
  return acc / static_cast<double>(count);
}

}  // namespace dynphase
