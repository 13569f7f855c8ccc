#include "kernels_impl.hpp"

namespace dynphase::kernels::scalar {

// Products are spelled out on real/imaginary parts; std::complex operator*
// carries an Annex G NaN-recovery branch we do not want in the inner loop.

Complex dotc(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += xr * yr + xi * yi;
    im += xi * yr - xr * yi;
  }
  return {re, im};
}

Complex dotu(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

void axpy(Complex a, const Complex* x, Complex* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = Complex(y[k].real() + ar * xr - ai * xi,
                   y[k].imag() + ar * xi + ai * xr);
  }
}

double norm_sq(const Complex* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
  return acc;
}

}  // namespace dynphase::kernels::scalar
