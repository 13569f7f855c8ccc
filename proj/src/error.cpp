#include "dynphase/error.hpp"

namespace dynphase {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kDimensionMismatch: return "dimension_mismatch";
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kNonFinite: return "non_finite";
    case Errc::kSingular: return "singular";
    case Errc::kNonConvergence: return "non_convergence";
    case Errc::kDefective: return "defective";
    case Errc::kOverflow: return "overflow";
    case Errc::kBudgetExceeded: return "budget_exceeded";
    case Errc::kZeroMagnitude: return "zero_magnitude";
    case Errc::kInconsistentData: return "inconsistent_data";
    case Errc::kNotAFrame: return "not_a_frame";
    case Errc::kParse: return "parse_error";
  }
  return "unknown";
}

}  // namespace dynphase
