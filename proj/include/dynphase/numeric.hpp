#pragma once

#include <complex>
#include <cstdint>

namespace dynphase {

/// Exact binomial coefficient; zero when k > n. Throws Errc::kOverflow when
/// the value does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) saturated at UINT64_MAX, for enumeration budgets.
std::uint64_t binomial_saturated(std::uint64_t n, std::uint64_t k) noexcept;

/// Integer power by repeated squaring; base^0 == 1 including 0^0.
std::complex<double> ipow(std::complex<double> base, std::uint64_t exponent);

}  // namespace dynphase
