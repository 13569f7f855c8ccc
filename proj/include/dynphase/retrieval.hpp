#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "dynphase/frames.hpp"
#include "dynphase/instances.hpp"
#include "dynphase/linalg.hpp"
#include "dynphase/polarization.hpp"

namespace dynphase {

struct MeasurementConfig {
  PolarizationAngles angles = PolarizationAngles::standard();
  /// Longest jump is jumps + 1.
  std::size_t jumps = 0;
  /// base[l] <= zero_tol * max(base) counts as a zero coefficient.
  double zero_tol = 1e-9;
  /// Real variant: a single shifted measurement |c_l + real_sign * c_{l+j}|.
  bool real_mode = false;
  int real_sign = 1;
  /// Slack allowed on extracted cosines before data is called inconsistent.
  double consistency_tol = 1e-6;

  friend bool operator==(const MeasurementConfig&, const MeasurementConfig&) = default;
};

/// Index of an aligned measurement; k is 1-based.
struct AlignedKey {
  std::size_t l = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  friend auto operator<=>(const AlignedKey&, const AlignedKey&) = default;
};

struct MeasurementSet {
  std::size_t length = 0;
  std::size_t jumps = 0;
  /// Shift angles used for k = 1, 2. In real mode both hold 0 or pi.
  std::array<double, 2> angles{};
  bool real_mode = false;
  std::vector<double> base;
  std::map<AlignedKey, double> aligned;

  std::size_t shifts_per_edge() const noexcept { return real_mode ? 1 : 2; }
  double at(std::size_t l, std::size_t j, std::size_t k) const;

  friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

/// Throws Errc::kInvalidArgument unless the (l, j, k) grid is exactly the one
/// declared by (length, jumps, real_mode) and every value is finite and >= 0.
void validate(const MeasurementSet& ms);

/// base[l] = |<x, A^l phi>|, aligned(l, j, k) = |<x, A^l phi + e^{i alpha_k} A^{l+j} phi>|,
/// evaluated directly from the frame vectors.
MeasurementSet measure(const ComplexVector& x, const DynamicalFrame& frame,
                       const MeasurementConfig& cfg);

enum class RecoveryStatus { kRecovered, kRecoveredPartialChain, kFailed };
std::string_view to_string(RecoveryStatus status) noexcept;

struct RecoveryResult {
  ComplexVector estimate;
  RecoveryStatus status = RecoveryStatus::kFailed;
  /// Indices whose coefficient phase was assigned, ascending.
  std::vector<std::size_t> used_indices;
  std::size_t component_size = 0;
  /// Zero coefficients used as extra linear constraints.
  std::size_t known_zeros = 0;
  /// Euclidean distance between the remeasured and the given magnitudes.
  double residual = 0.0;
};

/// All coefficients nonzero: chain l -> l+1 with polarization, fix arg c_0 = 0
/// and reconstruct through the canonical dual. Throws Errc::kZeroMagnitude
/// when a base magnitude is at or below the zero threshold.
RecoveryResult recover_generic(const MeasurementSet& ms, const DynamicalFrame& frame,
                               const MeasurementConfig& cfg);

/// Zero-tolerant recovery for full-spark frames: phases propagate along the
/// largest chain component (edges of length up to jumps + 1) and the estimate
/// solves the component rows together with the known zero rows in the least
/// squares sense.
RecoveryResult recover_full_spark(const MeasurementSet& ms, const DynamicalFrame& frame,
                                  const MeasurementConfig& cfg);

/// Real frames and signals; recovery up to sign.
RecoveryResult recover_real(const MeasurementSet& ms, const DynamicalFrame& frame,
                            const MeasurementConfig& cfg);

/// recover_real in real mode, recover_generic when no base magnitude is zero,
/// recover_full_spark otherwise.
RecoveryResult recover(const MeasurementSet& ms, const DynamicalFrame& frame,
                       const MeasurementConfig& cfg);

/// Smallest L for which every zero pattern admits recovery:
/// ceil(d^2/4 + d/2) for J = 0, ceil((d+1)^2 / (4(J+1)) + d) for J >= 1.
std::size_t min_length(std::size_t dimension, std::size_t jumps);

/// min over theta of ||x - e^{i theta} y||.
double global_phase_distance(const ComplexVector& x, const ComplexVector& y);

/// Connected components of the nonzero indices under edges (l, l+j),
/// 1 <= j <= jumps + 1. Components are listed by their smallest index.
std::vector<std::vector<std::size_t>> chain_components(const std::vector<bool>& nonzero,
                                                       std::size_t jumps);

/// True iff the pattern has at least d zeros, or its largest component plus
/// the zero count reaches d.
bool pattern_recoverable(const std::vector<bool>& nonzero, std::size_t dimension,
                         std::size_t jumps);

/// Random x with <x, A^l phi> = 0 exactly for l in `zeros` (up to rounding) and
/// every other coefficient nonzero. nullopt when no such x was found.
std::optional<ComplexVector> signal_with_zero_pattern(const DynamicalFrame& frame,
                                                      const std::vector<std::size_t>& zeros,
                                                      Rng& rng);

}  // namespace dynphase
