#include "dynphase/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "dynphase/error.hpp"

namespace dynphase {

namespace {

// Measurement layout shared by measure() and the residual computation.
struct Layout {
  std::size_t length;
  std::size_t jumps;
  std::array<double, 2> angles;
  bool real_mode;
};

Layout layout_of(const MeasurementSet& ms) {
  return {ms.length, ms.jumps, ms.angles, ms.real_mode};
}

double real_shift(const Layout& layout) {
  return std::cos(layout.angles[0]) >= 0.0 ? 1.0 : -1.0;
}

MeasurementSet measure_layout(const ComplexVector& x, const DynamicalFrame& frame,
                              const Layout& layout) {
  if (x.size() != frame.dimension()) {
    fail(Errc::kDimensionMismatch, "measure: signal has length " + std::to_string(x.size()) +
                                       ", frame dimension is " +
                                       std::to_string(frame.dimension()));
  }
  if (layout.length != frame.length()) {
    fail(Errc::kDimensionMismatch, "measure: measurement length " +
                                       std::to_string(layout.length) +
                                       " differs from frame length " +
                                       std::to_string(frame.length()));
  }
  require_finite(x, "signal");

  MeasurementSet ms;
  ms.length = layout.length;
  ms.jumps = layout.jumps;
  ms.angles = layout.angles;
  ms.real_mode = layout.real_mode;
  ms.base.resize(layout.length);
  const auto& v = frame.vectors();
  for (std::size_t l = 0; l < layout.length; ++l) ms.base[l] = std::abs(inner_product(x, v[l]));

  std::array<Complex, 2> shift{};
  if (layout.real_mode) {
    shift[0] = real_shift(layout);
  } else {
    shift[0] = std::polar(1.0, layout.angles[0]);
    shift[1] = std::polar(1.0, layout.angles[1]);
  }
  const std::size_t shifts = layout.real_mode ? 1 : 2;
  for (std::size_t l = 0; l + 1 < layout.length; ++l) {
    for (std::size_t j = 1; j <= layout.jumps + 1 && l + j < layout.length; ++j) {
      for (std::size_t k = 0; k < shifts; ++k) {
        const ComplexVector probe = v[l] + shift[k] * v[l + j];
        ms.aligned[{l, j, k + 1}] = std::abs(inner_product(x, probe));
      }
    }
  }
  return ms;
}

void check_compatible(const MeasurementSet& ms, const DynamicalFrame& frame) {
  validate(ms);
  if (ms.length != frame.length()) {
    fail(Errc::kDimensionMismatch, "measurement set has L = " + std::to_string(ms.length) +
                                       " but the frame has L = " +
                                       std::to_string(frame.length()));
  }
}

std::vector<bool> nonzero_mask(const std::vector<double>& base, double zero_tol) {
  const double top = base.empty() ? 0.0 : *std::max_element(base.begin(), base.end());
  std::vector<bool> mask(base.size());
  for (std::size_t l = 0; l < base.size(); ++l) mask[l] = top > 0.0 && base[l] > zero_tol * top;
  return mask;
}

Complex unit(Complex z) { return z / std::abs(z); }

// Assigns coefficients c_l on one chain component by breadth-first phase
// propagation from its smallest index, whose phase is fixed to zero.
std::vector<Complex> propagate(const MeasurementSet& ms, const std::vector<std::size_t>& component,
                               std::size_t max_jump, const MeasurementConfig& cfg) {
  const std::size_t L = ms.length;
  std::vector<bool> member(L, false);
  for (std::size_t l : component) member[l] = true;
  std::vector<Complex> c(L);
  std::vector<bool> assigned(L, false);

  const PolarizationAngles angles =
      ms.real_mode ? PolarizationAngles::standard()
                   : PolarizationAngles(ms.angles[0], ms.angles[1]).negated();
  const int sign = real_shift(layout_of(ms)) > 0.0 ? 1 : -1;

  // conj(c_a) c_b for a < b, normalised to modulus one.
  auto edge_phase = [&](std::size_t a, std::size_t b) -> Complex {
    const std::size_t j = b - a;
    if (ms.real_mode) {
      const double p = recover_product_real(ms.base[a], ms.base[b], ms.at(a, j, 1), sign);
      return p >= 0.0 ? 1.0 : -1.0;
    }
    const PolarizationData data{ms.base[a], ms.base[b], ms.at(a, j, 1), ms.at(a, j, 2)};
    return unit(recover_product(data, angles, cfg.consistency_tol));
  };

  const std::size_t anchor = component.front();
  c[anchor] = ms.base[anchor];
  assigned[anchor] = true;
  std::deque<std::size_t> queue{anchor};
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t j = 1; j <= max_jump; ++j) {
      if (cur + j < L && member[cur + j] && !assigned[cur + j]) {
        const std::size_t nb = cur + j;
        c[nb] = ms.base[nb] * edge_phase(cur, nb) * unit(c[cur]);
        assigned[nb] = true;
        queue.push_back(nb);
      }
      if (cur >= j && member[cur - j] && !assigned[cur - j]) {
        const std::size_t nb = cur - j;
        c[nb] = ms.base[nb] * std::conj(edge_phase(nb, cur)) * unit(c[cur]);
        assigned[nb] = true;
        queue.push_back(nb);
      }
    }
  }
  return c;
}

double measurement_residual(const MeasurementSet& ms, const ComplexVector& estimate,
                            const DynamicalFrame& frame) {
  const MeasurementSet again = measure_layout(estimate, frame, layout_of(ms));
  double acc = 0.0;
  for (std::size_t l = 0; l < ms.length; ++l) {
    const double diff = again.base[l] - ms.base[l];
    acc += diff * diff;
  }
  for (const auto& [key, value] : ms.aligned) {
    const double diff = again.aligned.at(key) - value;
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

// Every coefficient nonzero: chain along j = 1 and reconstruct with the dual.
RecoveryResult recover_dense(const MeasurementSet& ms, const DynamicalFrame& frame,
                             const MeasurementConfig& cfg, const char* who) {
  check_compatible(ms, frame);
  const std::vector<bool> mask = nonzero_mask(ms.base, cfg.zero_tol);
  for (std::size_t l = 0; l < ms.length; ++l) {
    if (!mask[l]) {
      fail(Errc::kZeroMagnitude, std::string(who) + ": coefficient " + std::to_string(l) +
                                     " is zero; use the zero-tolerant recovery");
    }
  }
  std::vector<std::size_t> all(ms.length);
  for (std::size_t l = 0; l < ms.length; ++l) all[l] = l;
  const std::vector<Complex> c = propagate(ms, all, 1, cfg);

  RecoveryResult out;
  out.estimate = dual(frame).reconstruct(ComplexVector(c));
  out.status = RecoveryStatus::kRecovered;
  out.used_indices = std::move(all);
  out.component_size = ms.length;
  out.residual = measurement_residual(ms, out.estimate, frame);
  return out;
}

struct Attempt {
  std::vector<bool> mask;
  std::vector<std::size_t> component;  // largest, ties to the smallest index
  std::size_t zeros = 0;
};

Attempt plan(const MeasurementSet& ms, double zero_tol) {
  Attempt a;
  a.mask = nonzero_mask(ms.base, zero_tol);
  a.zeros = static_cast<std::size_t>(std::count(a.mask.begin(), a.mask.end(), false));
  for (auto& comp : chain_components(a.mask, ms.jumps)) {
    if (comp.size() > a.component.size()) a.component = std::move(comp);
  }
  return a;
}

ComplexVector solve_component(const MeasurementSet& ms, const DynamicalFrame& frame,
                              const Attempt& a, const MeasurementConfig& cfg) {
  const std::vector<Complex> c = propagate(ms, a.component, ms.jumps + 1, cfg);

  // Rows <v_l, .>^* in descending magnitude, then the known zeros.
  std::vector<std::size_t> rows = a.component;
  std::stable_sort(rows.begin(), rows.end(),
                   [&](std::size_t p, std::size_t q) { return ms.base[p] > ms.base[q]; });
  for (std::size_t l = 0; l < ms.length; ++l) {
    if (!a.mask[l]) rows.push_back(l);
  }
  const std::size_t d = frame.dimension();
  ComplexMatrix system(rows.size(), d);
  ComplexVector rhs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ComplexVector& v = frame.vector(rows[i]);
    for (std::size_t col = 0; col < d; ++col) system(i, col) = std::conj(v[col]);
    rhs[i] = a.mask[rows[i]] ? c[rows[i]] : Complex{};
  }
  return solve_least_squares(system, rhs);
}

}  // namespace

double MeasurementSet::at(std::size_t l, std::size_t j, std::size_t k) const {
  const auto it = aligned.find({l, j, k});
  if (it == aligned.end()) {
    fail(Errc::kInvalidArgument, "missing aligned measurement (l=" + std::to_string(l) +
                                     ", j=" + std::to_string(j) + ", k=" + std::to_string(k) +
                                     ")");
  }
  return it->second;
}

void validate(const MeasurementSet& ms) {
  if (ms.base.size() != ms.length) {
    fail(Errc::kInvalidArgument, "measurement set: base has " + std::to_string(ms.base.size()) +
                                     " entries, expected L = " + std::to_string(ms.length));
  }
  for (double b : ms.base) {
    if (!std::isfinite(b) || b < 0.0) {
      fail(Errc::kInvalidArgument, "measurement set: base values must be finite and >= 0");
    }
  }
  std::size_t expected = 0;
  for (std::size_t l = 0; l + 1 < ms.length; ++l) {
    for (std::size_t j = 1; j <= ms.jumps + 1 && l + j < ms.length; ++j) {
      for (std::size_t k = 1; k <= ms.shifts_per_edge(); ++k) {
        const auto it = ms.aligned.find({l, j, k});
        if (it == ms.aligned.end()) {
          fail(Errc::kInvalidArgument, "measurement set: missing aligned entry (l=" +
                                           std::to_string(l) + ", j=" + std::to_string(j) +
                                           ", k=" + std::to_string(k) + ")");
        }
        if (!std::isfinite(it->second) || it->second < 0.0) {
          fail(Errc::kInvalidArgument,
               "measurement set: aligned values must be finite and >= 0");
        }
        ++expected;
      }
    }
  }
  if (expected != ms.aligned.size()) {
    fail(Errc::kInvalidArgument, "measurement set: aligned entries outside the declared grid");
  }
}

MeasurementSet measure(const ComplexVector& x, const DynamicalFrame& frame,
                       const MeasurementConfig& cfg) {
  const std::size_t d = frame.dimension();
  if (d >= 2 && cfg.jumps > d - 2) {
    fail(Errc::kInvalidArgument, "measure: jumps must be at most d - 2");
  }
  if (d < 2 && cfg.jumps != 0) fail(Errc::kInvalidArgument, "measure: jumps must be 0 for d < 2");
  Layout layout{frame.length(), cfg.jumps, {cfg.angles.first(), cfg.angles.second()},
                cfg.real_mode};
  if (cfg.real_mode) {
    if (cfg.real_sign != 1 && cfg.real_sign != -1) {
      fail(Errc::kInvalidArgument, "measure: real_sign must be +1 or -1");
    }
    const double a = cfg.real_sign > 0 ? 0.0 : std::numbers::pi;
    layout.angles = {a, a};
  }
  return measure_layout(x, frame, layout);
}

std::string_view to_string(RecoveryStatus status) noexcept {
  switch (status) {
    case RecoveryStatus::kRecovered: return "recovered";
    case RecoveryStatus::kRecoveredPartialChain: return "recovered_partial_chain";
    case RecoveryStatus::kFailed: return "failed";
  }
  return "unknown";
}

RecoveryResult recover_generic(const MeasurementSet& ms, const DynamicalFrame& frame,
                               const MeasurementConfig& cfg) {
  if (ms.real_mode) fail(Errc::kInvalidArgument, "recover_generic: real-mode measurements");
  return recover_dense(ms, frame, cfg, "recover_generic");
}

RecoveryResult recover_real(const MeasurementSet& ms, const DynamicalFrame& frame,
                            const MeasurementConfig& cfg) {
  if (!ms.real_mode) fail(Errc::kInvalidArgument, "recover_real: complex-mode measurements");
  return recover_dense(ms, frame, cfg, "recover_real");
}

RecoveryResult recover_full_spark(const MeasurementSet& ms, const DynamicalFrame& frame,
                                  const MeasurementConfig& cfg) {
  check_compatible(ms, frame);
  const std::size_t d = frame.dimension();
  RecoveryResult out;
  out.estimate = ComplexVector(d);

  Attempt a = plan(ms, cfg.zero_tol);
  out.known_zeros = a.zeros;
  if (a.zeros >= d) {
    // A full-spark family has at most d - 1 coefficients of a nonzero x vanishing.
    out.status = RecoveryStatus::kRecovered;
    out.residual = measurement_residual(ms, out.estimate, frame);
    return out;
  }

  RecoveryStatus status = RecoveryStatus::kRecovered;
  if (a.component.size() + a.zeros < d) {
    Attempt relaxed = plan(ms, cfg.zero_tol * 1e-3);
    if (relaxed.component.size() + relaxed.zeros < d) {
      out.used_indices = a.component;
      out.component_size = a.component.size();
      out.residual = measurement_residual(ms, out.estimate, frame);
      return out;
    }
    a = std::move(relaxed);
    status = RecoveryStatus::kRecoveredPartialChain;
  }

  out.estimate = solve_component(ms, frame, a, cfg);
  out.status = status;
  out.used_indices = a.component;
  out.component_size = a.component.size();
  out.known_zeros = a.zeros;
  out.residual = measurement_residual(ms, out.estimate, frame);
  return out;
}

RecoveryResult recover(const MeasurementSet& ms, const DynamicalFrame& frame,
                       const MeasurementConfig& cfg) {
  const std::vector<bool> mask = nonzero_mask(ms.base, cfg.zero_tol);
  const bool dense = std::all_of(mask.begin(), mask.end(), [](bool b) { return b; });
  if (dense && ms.length >= frame.dimension()) {
    return ms.real_mode ? recover_real(ms, frame, cfg) : recover_generic(ms, frame, cfg);
  }
  return recover_full_spark(ms, frame, cfg);
}

std::size_t min_length(std::size_t d, std::size_t jumps) {
  if (d == 0) fail(Errc::kInvalidArgument, "min_length: d must be >= 1");
  if (jumps > 0 && (d < 2 || jumps > d - 2)) {
    fail(Errc::kInvalidArgument, "min_length: J must satisfy 0 <= J <= d - 2");
  }
  if (jumps == 0) return (d * d + 2 * d + 3) / 4;
  const std::size_t num = (d + 1) * (d + 1);
  const std::size_t den = 4 * (jumps + 1);
  return d + (num + den - 1) / den;
}

double global_phase_distance(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) {
    fail(Errc::kDimensionMismatch, "global_phase_distance: lengths differ");
  }
  // The minimiser is e^{i theta} = <x, y> / |<x, y>|. Evaluating ||x - e^{i theta} y||
  // directly avoids the cancellation in sqrt(|x|^2 + |y|^2 - 2 |<x, y>|), which
  // bottoms out near sqrt(eps) * ||x||.
  const Complex overlap = inner_product(x, y);
  const Complex u = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return norm(x - u * y);
}

std::vector<std::vector<std::size_t>> chain_components(const std::vector<bool>& nonzero,
                                                       std::size_t jumps) {
  // Edges only join indices at distance <= jumps + 1, so scanning in order and
  // splitting at gaps of more than `jumps` zeros yields the components.
  std::vector<std::vector<std::size_t>> out;
  std::size_t last = 0;
  for (std::size_t l = 0; l < nonzero.size(); ++l) {
    if (!nonzero[l]) continue;
    if (out.empty() || l - last > jumps + 1) out.emplace_back();
    out.back().push_back(l);
    last = l;
  }
  return out;
}

bool pattern_recoverable(const std::vector<bool>& nonzero, std::size_t d, std::size_t jumps) {
  const std::size_t zeros =
      static_cast<std::size_t>(std::count(nonzero.begin(), nonzero.end(), false));
  std::size_t largest = 0;
  for (const auto& comp : chain_components(nonzero, jumps)) {
    largest = std::max(largest, comp.size());
  }
  return zeros >= d || largest + zeros >= d;
}

std::optional<ComplexVector> signal_with_zero_pattern(const DynamicalFrame& frame,
                                                      const std::vector<std::size_t>& zeros,
                                                      Rng& rng) {
  const std::size_t d = frame.dimension();
  ComplexMatrix basis(d, 0);
  if (!zeros.empty()) {
    std::vector<ComplexVector> cols;
    for (std::size_t l : zeros) cols.push_back(frame.vector(l));
    basis = orthonormal_basis(ComplexMatrix::from_columns(cols));
    if (basis.cols() >= d) return std::nullopt;
  }
  std::vector<bool> is_zero(frame.length(), false);
  for (std::size_t l : zeros) is_zero.at(l) = true;

  constexpr int kAttempts = 20;
  constexpr double kNonzeroFloor = 1e-6;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    ComplexVector x = random_vector(rng, d);
    for (std::size_t q = 0; q < basis.cols(); ++q) {
      const ComplexVector e = basis.column(q);
      x = x - inner_product(x, e) * e;
    }
    const double nx = norm(x);
    if (nx == 0.0) continue;
    x = Complex(1.0 / nx) * x;
    const ComplexVector c = frame.coefficients(x);
    const double top = max_abs(c);
    bool ok = top > 0.0;
    for (std::size_t l = 0; ok && l < c.size(); ++l) {
      if (!is_zero[l]) ok = std::abs(c[l]) > kNonzeroFloor * top;
    }
    if (ok) return x;
  }
  return std::nullopt;
}

}  // namespace dynphase
