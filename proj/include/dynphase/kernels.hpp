#pragma once

// Complex double-precision inner loops. Every kernel has a scalar reference
// implementation; an AVX2/FMA variant is compiled on x86-64 and selected at
// runtime when the CPU supports it. Setting DYNPHASE_KERNELS=scalar in the
// environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace dynphase::kernels {

using Complex = std::complex<double>;

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  // sum_k x[k] * conj(y[k])
  Complex (*dotc)(const Complex* x, const Complex* y, std::size_t n);
  // sum_k x[k] * y[k]
  Complex (*dotu)(const Complex* x, const Complex* y, std::size_t n);
  // y[k] += a * x[k]
  void (*axpy)(Complex a, const Complex* x, Complex* y, std::size_t n);
  // sum_k |x[k]|^2
  double (*norm_sq)(const Complex* x, std::size_t n);
};

bool available(Backend backend) noexcept;
const KernelTable& table(Backend backend);

const KernelTable& active() noexcept;
Backend active_backend() noexcept;
/// Throws dynphase::Error if the backend is not available on this CPU.
void select(Backend backend);

std::string_view name(Backend backend) noexcept;

inline Complex dotc(std::span<const Complex> x, std::span<const Complex> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline Complex dotu(std::span<const Complex> x, std::span<const Complex> y) {
  return active().dotu(x.data(), y.data(), x.size());
}
inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const Complex> x) {
  return active().norm_sq(x.data(), x.size());
}

}  // namespace dynphase::kernels
