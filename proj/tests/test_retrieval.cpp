#include <numbers>

#include "doctest.h"
#include "dynphase/error.hpp"
#include "dynphase/frames.hpp"
#include "dynphase/instances.hpp"
#include "dynphase/retrieval.hpp"
#include "support.hpp"

using namespace dynphase;
using testing::to_oracle;

namespace {

constexpr double kPi = std::numbers::pi;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dynphase::Error");
  return Errc::kParse;
}

DynamicalFrame cyclic_shift_frame(std::size_t d) {
  ComplexMatrix shift(d, d);
  for (std::size_t i = 0; i < d; ++i) shift((i + 1) % d, i) = 1.0;
  ComplexVector e0(d);
  e0[0] = 1.0;
  return DynamicalFrame::build(shift, e0, d);
}

// x orthogonal to the listed frame vectors, by Gram-Schmidt against an
// oracle-computed basis of their span.
ComplexVector orthogonal_to(const DynamicalFrame& f, const std::vector<std::size_t>& idx, Rng& rng) {
  oracle::Vec x = to_oracle(random_vector(rng, f.dimension()));
  std::vector<oracle::Vec> q;
  for (std::size_t l : idx) {
    oracle::Vec v = to_oracle(f.vector(l));
    for (const auto& u : q) {
      const auto p = oracle::inner(v, u);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * u[i];
    }
    const double n = oracle::norm(v);
    for (auto& z : v) z /= n;
    q.push_back(v);
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : q) {
      const auto p = oracle::inner(x, u);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= p * u[i];
    }
  }
  return ComplexVector(std::vector<Complex>(x.begin(), x.end()));
}

MeasurementConfig with_jumps(std::size_t j) {
  MeasurementConfig cfg;
  cfg.jumps = j;
  return cfg;
}

}  // namespace

TEST_CASE("measure: trivial signals") {
  const DynamicalFrame h = harmonic_frame(3, 5);
  const MeasurementSet zero = measure(ComplexVector(3), h, with_jumps(1));
  for (double b : zero.base) CHECK(b == 0.0);
  for (const auto& [key, v] : zero.aligned) CHECK(v == 0.0);
  CHECK(zero.aligned.size() == 2 * (4 + 3));

  const ComplexVector x{1.0, -1.0, 0.0};  // orthogonal to (1, 1, 1)
  CHECK(measure(x, h, {}).base[0] == 0.0);
  CHECK_THROWS_AS(measure(ComplexVector(2), h, {}), Error);
  CHECK(code_of([&] { measure(x, h, with_jumps(2)); }) == Errc::kInvalidArgument);
}

TEST_CASE("measure: values match direct inner products") {
  Rng rng(61);
  const DynamicalFrame h = harmonic_frame(3, 5);
  MeasurementConfig cfg = with_jumps(1);
  cfg.angles = PolarizationAngles(0.4, 1.9);
  const ComplexVector x = random_vector(rng, 3);
  const MeasurementSet ms = measure(x, h, cfg);
  validate(ms);
  const auto xo = to_oracle(x);
  for (std::size_t l = 0; l < 5; ++l) {
    CHECK(std::abs(ms.base[l] - std::abs(oracle::inner(xo, to_oracle(h.vector(l))))) < 1e-12);
  }
  const double alpha[2] = {0.4, 1.9};
  for (const auto& [key, value] : ms.aligned) {
    auto v = to_oracle(h.vector(key.l));
    const auto w = to_oracle(h.vector(key.l + key.j));
    for (std::size_t i = 0; i < 3; ++i) v[i] += std::polar(1.0, alpha[key.k - 1]) * w[i];
    CHECK(std::abs(value - std::abs(oracle::inner(xo, v))) < 1e-12);
  }
}

TEST_CASE("measurements are invariant under a global phase") {
  Rng rng(62);
  const DynamicalFrame f = DynamicalFrame::build(
      ComplexMatrix::diagonal(random_separated_eigenvalues(rng, 4, 0.2)), random_vector(rng, 4), 7);
  const ComplexVector x = random_vector(rng, 4);
  const MeasurementSet a = measure(x, f, with_jumps(2));
  for (double theta : {0.3, 1.7, -2.9}) {
    const MeasurementSet b = measure(std::polar(1.0, theta) * x, f, with_jumps(2));
    for (std::size_t l = 0; l < 7; ++l) CHECK(std::abs(a.base[l] - b.base[l]) <= 1e-12);
    for (const auto& [key, v] : a.aligned) CHECK(std::abs(v - b.aligned.at(key)) <= 1e-12);
  }
}

TEST_CASE("validate checks the index grid") {
  const MeasurementSet ms = measure(ComplexVector{1.0, 2.0, 3.0}, harmonic_frame(3, 5), {});
  MeasurementSet missing = ms;
  missing.aligned.erase(missing.aligned.begin());
  CHECK(code_of([&] { validate(missing); }) == Errc::kInvalidArgument);
  MeasurementSet extra = ms;
  extra.aligned[{0, 2, 1}] = 1.0;
  CHECK(code_of([&] { validate(extra); }) == Errc::kInvalidArgument);
  MeasurementSet negative = ms;
  negative.base[1] = -1.0;
  CHECK(code_of([&] { validate(negative); }) == Errc::kInvalidArgument);
  CHECK(code_of([&] { ms.at(3, 2, 1); }) == Errc::kInvalidArgument);
}

TEST_CASE("generic recovery") {
  Rng rng(63);
  const DynamicalFrame h = harmonic_frame(4, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexVector x = random_vector(rng, 4);
    const RecoveryResult r = recover_generic(measure(x, h, {}), h, {});
    CHECK(r.status == RecoveryStatus::kRecovered);
    CHECK(r.component_size == 6);
    CHECK(global_phase_distance(r.estimate, x) <= 1e-8 * norm(x));
    CHECK(r.residual <= 1e-10 * norm(x));
    // The phase is fixed by making c_0 real and positive.
    const Complex c0 = inner_product(r.estimate, h.vector(0));
    CHECK(std::abs(c0.imag()) <= 1e-10 * std::abs(c0));
    CHECK(c0.real() > 0.0);
  }

  const ComplexVector x2 = orthogonal_to(h, {2}, rng);
  CHECK(code_of([&] { recover_generic(measure(x2, h, {}), h, {}); }) == Errc::kZeroMagnitude);
}

TEST_CASE("generic recovery on random diagonalizable frames") {
  Rng rng(64);
  int done = 0;
  while (done < 60) {
    const std::size_t d = 2 + static_cast<std::size_t>(done % 5);
    const std::size_t L = d + static_cast<std::size_t>(rng() % (d + 1));
    const DynamicalFrame f = DynamicalFrame::build(
        ComplexMatrix::diagonal(random_separated_eigenvalues(rng, d, 0.2)), random_vector(rng, d), L);
    const ComplexVector x = random_vector(rng, d);
    const ComplexVector c = f.coefficients(x);
    if (max_abs(c) == 0.0 || std::abs(c[0]) < 1e-3 * max_abs(c)) continue;
    bool small = false;
    for (const Complex& z : c) small = small || std::abs(z) < 1e-3 * max_abs(c);
    if (small) continue;
    const RecoveryResult r = recover(measure(x, f, {}), f, {});
    CHECK(global_phase_distance(r.estimate, x) <= 1e-7 * norm(x));
    ++done;
  }
}

TEST_CASE("full spark recovery: zero signal and isolated zeros") {
  const DynamicalFrame h = harmonic_frame(3, 5);
  const RecoveryResult zero = recover_full_spark(measure(ComplexVector(3), h, {}), h, {});
  CHECK(zero.status == RecoveryStatus::kRecovered);
  CHECK(norm(zero.estimate) == 0.0);
  CHECK(zero.known_zeros == 5);

  Rng rng(65);
  const ComplexVector x = orthogonal_to(h, {2}, rng);
  const MeasurementSet ms = measure(x, h, {});
  CHECK(ms.base[2] <= 1e-14 * norm(x));
  const RecoveryResult r = recover(ms, h, {});
  CHECK(r.status == RecoveryStatus::kRecovered);
  CHECK(r.known_zeros == 1);
  CHECK(global_phase_distance(r.estimate, x) <= 1e-8 * norm(x));

  // A basis vector over the cyclic shift basis has a single nonzero coefficient.
  const DynamicalFrame shift = cyclic_shift_frame(3);
  const ComplexVector scaled_phi{Complex(0.0, 2.0), 0.0, 0.0};
  const RecoveryResult s = recover(measure(scaled_phi, shift, {}), shift, {});
  CHECK(s.status == RecoveryStatus::kRecovered);
  CHECK(norm(s.estimate - ComplexVector{2.0, 0.0, 0.0}) < 1e-15);
}

TEST_CASE("every zero pattern at d = 4, L = 6 is recovered") {
  const DynamicalFrame h = harmonic_frame(4, 6);
  Rng rng(66);
  int patterns = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<bool> nonzero(6);
    std::vector<std::size_t> zeros;
    for (std::size_t l = 0; l < 6; ++l) {
      nonzero[l] = ((mask >> l) & 1u) != 0;
      if (!nonzero[l]) zeros.push_back(l);
    }
    if (zeros.size() > 3) continue;
    ++patterns;
    CHECK(pattern_recoverable(nonzero, 4, 0));
    const ComplexVector x = orthogonal_to(h, zeros, rng);
    const MeasurementSet ms = measure(x, h, {});
    for (std::size_t l = 0; l < 6; ++l) CHECK((ms.base[l] > 1e-9 * max_abs(x)) == nonzero[l]);
    const RecoveryResult r = recover(ms, h, {});
    CHECK(r.status == RecoveryStatus::kRecovered);
    CHECK(global_phase_distance(r.estimate, x) <= 1e-8 * norm(x));
  }
  CHECK(patterns == 1 + 6 + 15 + 20);
}

TEST_CASE("one step below the bound a pattern defeats J = 0 but not J = 1") {
  std::vector<bool> worst{true, true, false, true, true};
  CHECK_FALSE(pattern_recoverable(worst, 4, 0));
  CHECK(pattern_recoverable(worst, 4, 1));

  const DynamicalFrame h = harmonic_frame(4, 5);
  Rng rng(67);
  const ComplexVector x = orthogonal_to(h, {2}, rng);
  const RecoveryResult j0 = recover(measure(x, h, {}), h, {});
  CHECK(j0.status == RecoveryStatus::kFailed);
  CHECK(norm(j0.estimate) == 0.0);
  const RecoveryResult j1 = recover(measure(x, h, with_jumps(1)), h, with_jumps(1));
  CHECK(j1.status == RecoveryStatus::kRecovered);
  CHECK(j1.component_size == 4);
  CHECK(global_phase_distance(j1.estimate, x) <= 1e-8 * norm(x));
}

TEST_CASE("a nonzero signal over a full spark frame has at most d - 1 zero coefficients") {
  const DynamicalFrame h = harmonic_frame(4, 7);
  Rng rng(68);
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < m; ++i) zeros.push_back(2 * i);
    const auto x = signal_with_zero_pattern(h, zeros, rng);
    REQUIRE(x.has_value());
    const ComplexVector c = h.coefficients(*x);
    std::size_t count = 0;
    for (const Complex& z : c) count += std::abs(z) <= 1e-9 * max_abs(c) ? 1 : 0;
    CHECK(count == m);
  }
  CHECK_FALSE(signal_with_zero_pattern(h, {0, 1, 2, 3}, rng).has_value());
}

TEST_CASE("min_length") {
  CHECK(min_length(4, 0) == 6);
  CHECK(min_length(5, 0) == 9);
  CHECK(min_length(5, 1) == 10);
  CHECK(min_length(1, 0) == 1);
  for (std::size_t d = 1; d <= 12; ++d) {
    const double bound0 = d * d / 4.0 + d / 2.0;
    CHECK(static_cast<double>(min_length(d, 0)) >= bound0);
    CHECK(static_cast<double>(min_length(d, 0)) < bound0 + 1.0);
    for (std::size_t j = 1; d >= 2 && j <= d - 2; ++j) {
      const double bound = (d + 1.0) * (d + 1.0) / (4.0 * (j + 1.0)) + d;
      CHECK(static_cast<double>(min_length(d, j)) >= bound);
      CHECK(static_cast<double>(min_length(d, j)) < bound + 1.0);
    }
  }
  CHECK(code_of([] { min_length(0, 0); }) == Errc::kInvalidArgument);
  CHECK(code_of([] { min_length(4, 3); }) == Errc::kInvalidArgument);
}

TEST_CASE("pattern bound is exact at d = 4") {
  for (std::size_t L = 4; L <= 7; ++L) {
    bool all = true;
    for (unsigned mask = 0; mask < (1u << L); ++mask) {
      std::vector<bool> nonzero(L);
      std::size_t zeros = 0;
      for (std::size_t l = 0; l < L; ++l) {
        nonzero[l] = ((mask >> l) & 1u) != 0;
        zeros += nonzero[l] ? 0 : 1;
      }
      if (zeros <= 3) all = all && pattern_recoverable(nonzero, 4, 0);
    }
    CHECK(all == (L >= min_length(4, 0)));
  }
}

TEST_CASE("chain components") {
  const std::vector<bool> p{true, true, false, true, false, false, true};
  const auto c0 = chain_components(p, 0);
  REQUIRE(c0.size() == 3);
  CHECK(c0[0] == std::vector<std::size_t>{0, 1});
  CHECK(c0[1] == std::vector<std::size_t>{3});
  CHECK(c0[2] == std::vector<std::size_t>{6});
  CHECK(chain_components(p, 1).size() == 2);
  CHECK(chain_components(p, 2).size() == 1);
  CHECK(chain_components(std::vector<bool>(4, false), 1).empty());
}

TEST_CASE("real recovery up to sign") {
  MeasurementConfig cfg;
  cfg.real_mode = true;
  const DynamicalFrame rot = DynamicalFrame::build(rotation(kPi / 3), ComplexVector{1.0, 0.0}, 4);
  const ComplexVector x{0.7, -1.3};
  const MeasurementSet ms = measure(x, rot, cfg);
  CHECK(ms.shifts_per_edge() == 1);
  const RecoveryResult r = recover_real(ms, rot, cfg);
  const double plus = norm(r.estimate - x), minus = norm(r.estimate + x);
  CHECK(std::min(plus, minus) <= 1e-12);
  for (const Complex& z : r.estimate.values()) CHECK(std::abs(z.imag()) <= 1e-14);

  const MeasurementSet neg = measure(-1.0 * x, rot, cfg);
  for (std::size_t l = 0; l < 4; ++l) CHECK(neg.base[l] == ms.base[l]);
  const RecoveryResult rn = recover_real(neg, rot, cfg);
  CHECK(std::min(norm(rn.estimate - x), norm(rn.estimate + x)) <= 1e-12);

  MeasurementConfig minus_cfg = cfg;
  minus_cfg.real_sign = -1;
  const RecoveryResult rm = recover_real(measure(x, rot, minus_cfg), rot, minus_cfg);
  CHECK(std::min(norm(rm.estimate - x), norm(rm.estimate + x)) <= 1e-12);

  const DynamicalFrame shift = cyclic_shift_frame(3);
  const ComplexVector e1{0.0, 1.0, 0.0};
  const RecoveryResult s = recover(measure(e1, shift, cfg), shift, cfg);
  CHECK(s.status == RecoveryStatus::kRecovered);
  CHECK(std::min(norm(s.estimate - e1), norm(s.estimate + e1)) <= 1e-15);

  CHECK(code_of([&] { recover_real(measure(x, rot, {}), rot, {}); }) == Errc::kInvalidArgument);
  CHECK(code_of([&] { recover_generic(ms, rot, cfg); }) == Errc::kInvalidArgument);
}

TEST_CASE("global phase distance") {
  Rng rng(69);
  const ComplexVector x = random_vector(rng, 5);
  CHECK(global_phase_distance(x, std::polar(1.0, 2.1) * x) <= 1e-15 * norm(x));
  CHECK(global_phase_distance(x, ComplexVector(5)) == doctest::Approx(norm(x)));
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexVector a = random_vector(rng, 4), b = random_vector(rng, 4);
    const double grid = oracle::grid_phase_distance(to_oracle(a), to_oracle(b), 100000);
    const double got = global_phase_distance(a, b);
    CHECK(got <= grid + 1e-12);
    CHECK(grid - got <= 1e-5);
  }
  CHECK(code_of([] { global_phase_distance(ComplexVector(2), ComplexVector(3)); }) ==
        Errc::kDimensionMismatch);
}
