#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynphase {

enum class Errc {
  kDimensionMismatch,
  kInvalidArgument,
  kNonFinite,
  kSingular,
  kNonConvergence,
  kDefective,
  kOverflow,
  kBudgetExceeded,
  kZeroMagnitude,
  kInconsistentData,
  kNotAFrame,
  kParse,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// precondition or numerical contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dynphase
