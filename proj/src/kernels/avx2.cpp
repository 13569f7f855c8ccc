// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after a CPU feature check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace dynphase::kernels::avx2 {

namespace {

// A __m256d holds two interleaved complex numbers: [re0, im0, re1, im1].
inline const double* raw(const Complex* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* raw(Complex* p) { return reinterpret_cast<double*>(p); }

// Swap real and imaginary parts within each complex.
inline __m256d swap_parts(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

struct Lanes {
  double even;
  double odd;
};

inline Lanes reduce(__m256d v) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, v);
  return {buf[0] + buf[2], buf[1] + buf[3]};
}

}  // namespace

Complex dotc(const Complex* x, const Complex* y, std::size_t n) {
  // direct: [xr*yr, xi*yi], swapped: [xr*yi, xi*yr]
  __m256d direct0 = _mm256_setzero_pd(), direct1 = _mm256_setzero_pd();
  __m256d swapped0 = _mm256_setzero_pd(), swapped1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    const __m256d ya = _mm256_loadu_pd(raw(y + k));
    const __m256d xb = _mm256_loadu_pd(raw(x + k + 2));
    const __m256d yb = _mm256_loadu_pd(raw(y + k + 2));
    direct0 = _mm256_fmadd_pd(xa, ya, direct0);
    swapped0 = _mm256_fmadd_pd(xa, swap_parts(ya), swapped0);
    direct1 = _mm256_fmadd_pd(xb, yb, direct1);
    swapped1 = _mm256_fmadd_pd(xb, swap_parts(yb), swapped1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    const __m256d ya = _mm256_loadu_pd(raw(y + k));
    direct0 = _mm256_fmadd_pd(xa, ya, direct0);
    swapped0 = _mm256_fmadd_pd(xa, swap_parts(ya), swapped0);
  }
  const Lanes d = reduce(_mm256_add_pd(direct0, direct1));
  const Lanes s = reduce(_mm256_add_pd(swapped0, swapped1));
  Complex acc(d.even + d.odd, s.odd - s.even);
  for (; k < n; ++k) {
    acc += Complex(x[k].real() * y[k].real() + x[k].imag() * y[k].imag(),
                   x[k].imag() * y[k].real() - x[k].real() * y[k].imag());
  }
  return acc;
}

Complex dotu(const Complex* x, const Complex* y, std::size_t n) {
  __m256d direct0 = _mm256_setzero_pd(), direct1 = _mm256_setzero_pd();
  __m256d swapped0 = _mm256_setzero_pd(), swapped1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    const __m256d ya = _mm256_loadu_pd(raw(y + k));
    const __m256d xb = _mm256_loadu_pd(raw(x + k + 2));
    const __m256d yb = _mm256_loadu_pd(raw(y + k + 2));
    direct0 = _mm256_fmadd_pd(xa, ya, direct0);
    swapped0 = _mm256_fmadd_pd(xa, swap_parts(ya), swapped0);
    direct1 = _mm256_fmadd_pd(xb, yb, direct1);
    swapped1 = _mm256_fmadd_pd(xb, swap_parts(yb), swapped1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    const __m256d ya = _mm256_loadu_pd(raw(y + k));
    direct0 = _mm256_fmadd_pd(xa, ya, direct0);
    swapped0 = _mm256_fmadd_pd(xa, swap_parts(ya), swapped0);
  }
  const Lanes d = reduce(_mm256_add_pd(direct0, direct1));
  const Lanes s = reduce(_mm256_add_pd(swapped0, swapped1));
  Complex acc(d.even - d.odd, s.even + s.odd);
  for (; k < n; ++k) {
    acc += Complex(x[k].real() * y[k].real() - x[k].imag() * y[k].imag(),
                   x[k].real() * y[k].imag() + x[k].imag() * y[k].real());
  }
  return acc;
}

void axpy(Complex a, const Complex* x, Complex* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(raw(x + k));
    const __m256d yv = _mm256_loadu_pd(raw(y + k));
    // [ar*xr - ai*xi, ar*xi + ai*xr]
    const __m256d prod =
        _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, swap_parts(xv)));
    _mm256_storeu_pd(raw(y + k), _mm256_add_pd(yv, prod));
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = Complex(y[k].real() + a.real() * xr - a.imag() * xi,
                   y[k].imag() + a.real() * xi + a.imag() * xr);
  }
}

double norm_sq(const Complex* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    const __m256d xb = _mm256_loadu_pd(raw(x + k + 2));
    acc0 = _mm256_fmadd_pd(xa, xa, acc0);
    acc1 = _mm256_fmadd_pd(xb, xb, acc1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d xa = _mm256_loadu_pd(raw(x + k));
    acc0 = _mm256_fmadd_pd(xa, xa, acc0);
  }
  const Lanes l = reduce(_mm256_add_pd(acc0, acc1));
  double acc = l.even + l.odd;
  for (; k < n; ++k) {
    acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
  return acc;
}

}  // namespace dynphase::kernels::avx2
