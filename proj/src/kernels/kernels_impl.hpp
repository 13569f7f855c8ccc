#pragma once

#include "dynphase/kernels.hpp"

namespace dynphase::kernels {

namespace scalar {
Complex dotc(const Complex* x, const Complex* y, std::size_t n);
Complex dotu(const Complex* x, const Complex* y, std::size_t n);
void axpy(Complex a, const Complex* x, Complex* y, std::size_t n);
double norm_sq(const Complex* x, std::size_t n);
}  // namespace scalar

#if defined(DYNPHASE_HAVE_AVX2)
namespace avx2 {
Complex dotc(const Complex* x, const Complex* y, std::size_t n);
Complex dotu(const Complex* x, const Complex* y, std::size_t n);
void axpy(Complex a, const Complex* x, Complex* y, std::size_t n);
double norm_sq(const Complex* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace dynphase::kernels
