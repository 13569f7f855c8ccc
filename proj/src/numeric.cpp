#include "dynphase/numeric.hpp"

#include <limits>
#include <string>

#include "dynphase/error.hpp"

namespace dynphase {

namespace {

// Returns false on overflow. Uses the multiplicative recurrence
// C(n, i) = C(n, i-1) * (n - i + 1) / i, which stays integral at every step.
bool checked_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t& out) {
  if (k > n) {
    out = 0;
    return true;
  }
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t out = 0;
  if (!checked_binomial(n, k, out)) {
    fail(Errc::kOverflow, "binomial(" + std::to_string(n) + ", " +
                              std::to_string(k) + ") exceeds 64 bits");
  }
  return out;
}

std::uint64_t binomial_saturated(std::uint64_t n, std::uint64_t k) noexcept {
  std::uint64_t out = 0;
  if (!checked_binomial(n, k, out)) return std::numeric_limits<std::uint64_t>::max();
  return out;
}

std::complex<double> ipow(std::complex<double> base, std::uint64_t exponent) {
  std::complex<double> result(1.0, 0.0);
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

}  // namespace dynphase
